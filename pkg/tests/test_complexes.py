from __future__ import annotations

import json
from fractions import Fraction

import pytest

from linksep.certify import CutsetCollection
from linksep.complexes import (
    DAGGER,
    EDGE_MODE,
    PROPER,
    STAR,
    VERTEX_MODE,
    ComplexError,
    CutPartitionSystem,
    GluingError,
    GluingInfeasible,
    PolygonalComplex,
    antipodal_graph,
    balance_violations,
    build_sigma,
    build_systems,
    canonical_partition,
    check_link_condition,
    equatable,
    gluing_graph,
    induced_local_partition,
    link,
    skeleton_graph,
    solution_from_json,
    solve_gluing_equations,
    systems_from_json,
    three_coarsenings,
    verify_sigma,
    weighted_girth,
)
from linksep.fixtures import gq_link_complex, mixed_triangle_complex, single_polygon, three_squares


@pytest.fixture(scope="module")
def gq_link():
    cx = gq_link_complex()
    gg = gluing_graph(cx, EDGE_MODE)
    return cx, gg, build_systems(cx, EDGE_MODE, gg=gg)


@pytest.fixture(scope="module")
def mixed():
    cx = mixed_triangle_complex()
    gg = gluing_graph(cx, VERTEX_MODE)
    return cx, gg, build_systems(cx, VERTEX_MODE, gg=gg)


# -- complexes and links --------------------------------------------------------

@pytest.mark.parametrize("k", range(3, 9))
def test_polygon_corner_lengths(k):
    cx = single_polygon(k)
    for v in cx.vertices:
        lk = link(cx, v)
        assert [e.length for e in lk.graph.edges] == [Fraction(k - 2, k)]


def test_triangle_and_square_corners():
    assert link(single_polygon(3), 0).graph.edges[0].length == Fraction(1, 3)
    assert link(single_polygon(4), 0).graph.edges[0].length == Fraction(1, 2)


def test_secondary_link_is_a_cage_of_pi_edges():
    cx = gq_link_complex()
    lk = link(cx, ("m", 0))
    assert lk.graph.n == 2 and lk.graph.m == 3
    assert {e.length for e in lk.graph.edges} == {1}


def test_gq_link_condition():
    (verdict,) = check_link_condition(gq_link_complex())
    assert verdict.ok and verdict.girth == Fraction(8, 3)


def test_three_squares_violate_link_condition():
    verdicts = {v.cell[1]: v for v in check_link_condition(three_squares())}
    centre = verdicts[0]
    assert not centre.ok and centre.girth == Fraction(3, 2)
    assert sorted(f for f, _ in centre.cycle) == [0, 1, 2]
    assert all(v.ok for c, v in verdicts.items() if c != 0)


def test_girth_six_links_pass_at_exactly_two_pi():
    verdicts = check_link_condition(mixed_triangle_complex())
    assert len(verdicts) == 38
    assert all(v.ok and v.girth == 2 for v in verdicts)


def test_custom_angles_on_acyclic_links():
    cx = PolygonalComplex(range(3), [(0, 1), (1, 2), (2, 0)], [[(0, 1), (1, 1), (2, 1)]],
                          angles={0: [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)]})
    assert [weighted_girth(link(cx, v).graph)[0] for v in range(3)] == [None, None, None]
    assert link(cx, 1).graph.edges[0].length == Fraction(1, 4)


def test_angles_must_sum_correctly():
    with pytest.raises(ComplexError):
        PolygonalComplex(range(3), [(0, 1), (1, 2), (2, 0)], [[(0, 1), (1, 1), (2, 1)]],
                         angles={0: [Fraction(1, 2)] * 3})


def test_face_must_close():
    with pytest.raises(ComplexError):
        PolygonalComplex(range(4), [(0, 1), (1, 2), (2, 3)], [[(0, 1), (1, 1), (2, 1)]])


def test_json_round_trip():
    for cx in (gq_link_complex(), three_squares(), single_polygon(5)):
        back = PolygonalComplex.from_json(json.dumps(cx.to_json()))
        assert back.edges == cx.edges
        assert [f.darts for f in back.faces] == [f.darts for f in cx.faces]
        assert [f.angles for f in back.faces] == [f.angles for f in cx.faces]


def test_alternating_boundary_input():
    data = {"vertices": [0, 1, 2, 3], "edges": [[0, 1], [2, 1], [2, 3], [3, 0]],
            "faces": [{"boundary": [0, 0, 1, 1, 2, 2, 3, 3]}]}
    cx = PolygonalComplex.from_json(data)
    assert cx.faces[0].darts == ((0, 1), (1, -1), (2, 1), (3, 1))
    bad = dict(data, faces=[[0, 0, 2, 1, 1, 2, 3, 3]])
    with pytest.raises(ComplexError):
        PolygonalComplex.from_json(bad)


# -- gluing graphs ------------------------------------------------------------------

@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_antipodal_edges_per_face(k):
    assert len(antipodal_graph(single_polygon(k)).edges) == k


def test_triangle_antipodes_join_vertex_and_midpoint():
    gg = antipodal_graph(single_polygon(3))
    assert all({e.tail.cell[0], e.head.cell[0]} == {"v", "m"} for e in gg.edges)


def test_square_antipodes_are_like_cells():
    gg = antipodal_graph(single_polygon(4))
    assert sorted((e.tail.cell[0], e.head.cell[0]) for e in gg.edges) == [("m", "m")] * 2 + [("v", "v")] * 2


def test_gq_link_antipodal_count(gq_link):
    cx, gg, _ = gq_link
    assert len(gg.edges) == sum(f.k for f in cx.faces) == 45
    assert len(gg.cells) == 16


def test_non_regular_complex_rejected():
    cx = PolygonalComplex(range(3), [(0, 1), (1, 2), (2, 0)], [[(0, 1), (1, 1), (2, 1)]],
                          angles={0: [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)]})
    with pytest.raises(ComplexError):
        antipodal_graph(cx)


def test_skeleton_graph_orientation():
    cx = three_squares()
    gg = skeleton_graph(cx)
    assert [(e.tail.cell[1], e.head.cell[1]) for e in gg.edges] == list(cx.edges)


def test_unknown_mode():
    with pytest.raises(ValueError):
        gluing_graph(single_polygon(3), "face")


# -- partition systems ---------------------------------------------------------------

def test_regime_validation(gq_link):
    _, _, systems = gq_link
    s = systems[("v", 0)]
    with pytest.raises(GluingError):
        CutPartitionSystem(s.cell, s.link, "arbitrary", s.cutsets, s.weights, s.N, s.pairs)
    with pytest.raises(GluingError):
        CutPartitionSystem(s.cell, s.link, DAGGER, s.cutsets, s.weights, s.N, s.pairs)
    merged = tuple((k, ((0, 1),) + p[2:]) for k, p in s.pairs)
    with pytest.raises(GluingError):
        CutPartitionSystem(s.cell, s.link, PROPER, s.cutsets, s.weights, s.N, merged)
    single = tuple((k, (tuple(x for b in p for x in b),)) for k, p in s.pairs)
    with pytest.raises(GluingError):
        CutPartitionSystem(s.cell, s.link, PROPER, s.cutsets, s.weights, s.N, single)


def test_gq_link_systems(gq_link):
    _, _, systems = gq_link
    s = systems[("v", 0)]
    assert len(s.cutsets) == 10 and set(s.weights) == {1} and s.N == 2
    assert all(systems[c].N == 1 for c in systems if c[0] == "m")


def test_mixed_regimes(mixed):
    _, _, systems = mixed
    regimes = [systems[("v", v)].regime for v in range(38)]
    assert regimes == [STAR] * 12 + [DAGGER] * 26
    assert all(len(systems[("v", v)].cutsets) == 4 for v in range(12, 38))


# -- local partitions ------------------------------------------------------------------

def test_proper_canonical_splits_corner_endpoints(gq_link):
    cx, gg, systems = gq_link
    for e in gg.edges:
        for w in (0, 1):
            end = e.end(w)
            s = systems[end.cell]
            for p in range(len(s.pairs)):
                if s.contains(p, end.member):
                    assert induced_local_partition(cx, gg, e, w, s, p) == (("A",), ("B",))


def test_secondary_half_edges_split(gq_link):
    cx, gg, systems = gq_link
    e = next(e for e in gg.edges if e.head.cell[0] == "m")
    assert induced_local_partition(cx, gg, e, 1, systems[e.head.cell], 0) == (("A",), ("B",))


def test_pair_must_pass_through_edge(gq_link):
    cx, gg, systems = gq_link
    e = gg.edges[0]
    s = systems[e.tail.cell]
    p = next(p for p in range(len(s.pairs)) if not s.contains(p, e.tail.member))
    with pytest.raises(GluingError):
        induced_local_partition(cx, gg, e, 0, s, p)


def test_dagger_coarsenings_give_three_distinct_merges(mixed):
    cx, gg, systems = mixed
    checked = 0
    for e in gg.edges:
        end = e.tail
        s = systems[end.cell]
        if s.regime != DAGGER:
            continue
        through = [p for p in range(len(s.pairs)) if s.contains(p, end.member)]
        assert len(through) == 3
        parts = {induced_local_partition(cx, gg, e, 0, s, p) for p in through}
        assert len(parts) == 3
        assert all(sorted(map(len, q)) == [1, 2] for q in parts)
        checked += 1
    assert checked > 0


def test_equatable_matches_induced_partitions(mixed):
    cx, gg, systems = mixed
    seen = {True: 0, False: 0}
    for e in gg.edges[:60]:
        st, sh = systems[e.tail.cell], systems[e.head.cell]
        for pt in range(len(st.pairs)):
            if not st.contains(pt, e.tail.member):
                continue
            for ph in range(len(sh.pairs)):
                if not sh.contains(ph, e.head.member):
                    continue
                same = (induced_local_partition(cx, gg, e, 0, st, pt)
                        == induced_local_partition(cx, gg, e, 1, sh, ph))
                assert equatable(cx, gg, e, (st, pt), (sh, ph)) is same
                seen[same] += 1
    assert seen[True] and seen[False]


def test_dagger_dagger_edges_match_type_for_type(mixed):
    # between two dagger links the three faces around the edge carry the
    # same labels on both sides, so each coarsening has exactly one partner
    cx, gg, systems = mixed
    e = next(e for e in gg.edges if systems[e.tail.cell].regime == systems[e.head.cell].regime == DAGGER)
    st, sh = systems[e.tail.cell], systems[e.head.cell]
    tails = [p for p in range(len(st.pairs)) if st.contains(p, e.tail.member)]
    heads = [p for p in range(len(sh.pairs)) if sh.contains(p, e.head.member)]
    matrix = [[equatable(cx, gg, e, (st, a), (sh, b)) for b in heads] for a in tails]
    assert all(sum(row) == 1 for row in matrix)
    assert all(sum(col) == 1 for col in zip(*matrix))


# -- gluing equations ----------------------------------------------------------------

def test_gq_link_scaled_solution(gq_link):
    cx, gg, systems = gq_link
    sol = solve_gluing_equations(cx, systems, EDGE_MODE, gg=gg)
    assert sol.path == "scaled" and sol.M == 2
    assert not balance_violations(cx, gg, systems, sol.mu)
    assert set(sol.class_sums.values()) == {2}


def test_linear_method_balances(gq_link):
    cx, gg, systems = gq_link
    sol = solve_gluing_equations(cx, systems, EDGE_MODE, gg=gg, method="linear")
    assert sol.path == "linear"
    assert all(m >= 1 for m in sol.mu.values())
    assert not balance_violations(cx, gg, systems, sol.mu)


def test_product_scale(mixed):
    cx, gg, systems = mixed
    sol = solve_gluing_equations(cx, systems, VERTEX_MODE, gg=gg, scale="product")
    assert sol.path == "mixed-thirds" and sol.M == 3**13
    assert not balance_violations(cx, gg, systems, sol.mu)


def test_mixed_thirds_solution(mixed):
    cx, gg, systems = mixed
    sol = solve_gluing_equations(cx, systems, VERTEX_MODE, gg=gg)
    assert sol.path == "mixed-thirds" and sol.M == 3
    assert set(sol.class_sums.values()) == {1}
    dagger = [m for (c, _), m in sol.mu.items() if systems[c].regime == DAGGER]
    assert set(dagger) == {1}


def test_bad_scale_and_method(gq_link):
    cx, gg, systems = gq_link
    with pytest.raises(ValueError):
        solve_gluing_equations(cx, systems, EDGE_MODE, gg=gg, scale="max")
    with pytest.raises(ValueError):
        solve_gluing_equations(cx, systems, EDGE_MODE, gg=gg, method="guess")


def _drop_last_cutset(systems):
    s = systems[("v", 0)]
    cc = CutsetCollection.of(s.cutsets.cutsets[:-1])
    pairs = tuple(p for p in s.pairs if p[0] < len(cc))
    out = dict(systems)
    out[s.cell] = CutPartitionSystem(s.cell, s.link, PROPER, cc, s.weights[:-1], s.N, pairs)
    return out


def test_infeasible_gluing_reports_functional(gq_link):
    cx, gg, systems = gq_link
    systems = _drop_last_cutset(systems)
    with pytest.raises(GluingInfeasible) as info:
        solve_gluing_equations(cx, systems, EDGE_MODE, gg=gg)
    exc = info.value
    w = exc.functional
    assert all(x >= 0 for x in w) and any(x > 0 for x in w)
    combo = [sum(z * r[j] for z, r in zip(exc.combination, exc.rows)) for j in range(len(w))]
    assert combo == list(w)


def test_constructive_only_raises(gq_link):
    cx, gg, systems = gq_link
    with pytest.raises(GluingError):
        solve_gluing_equations(cx, _drop_last_cutset(systems), EDGE_MODE, gg=gg, method="constructive")


# -- Sigma ---------------------------------------------------------------------------

@pytest.mark.parametrize("seed", [None, 0, 7])
def test_gq_link_sigma(gq_link, seed):
    cx, gg, systems = gq_link
    sol = solve_gluing_equations(cx, systems, EDGE_MODE, gg=gg)
    sg = build_sigma(cx, systems, sol, gg=gg, seed=seed)
    assert len(sg.vertices) == sum(sol.mu.values()) == 40
    assert len(sg.edges) == 90
    assert all(verify_sigma(cx, systems, sol, sg, gg=gg).values())


@pytest.mark.parametrize("seed", [None, 3])
def test_mixed_sigma(mixed, seed):
    cx, gg, systems = mixed
    sol = solve_gluing_equations(cx, systems, VERTEX_MODE, gg=gg)
    sg = build_sigma(cx, systems, sol, gg=gg, seed=seed)
    assert (len(sg.vertices), len(sg.edges)) == (468, 1404)
    assert sum(len(c) for c in sg.components) == 468
    assert all(verify_sigma(cx, systems, sol, sg, gg=gg).values())


def test_sigma_rejects_unbalanced(gq_link):
    cx, gg, systems = gq_link
    sol = solve_gluing_equations(cx, systems, EDGE_MODE, gg=gg)
    sol.mu = dict(sol.mu)
    key = next(iter(sol.mu))
    sol.mu[key] += 1
    with pytest.raises(GluingError):
        build_sigma(cx, systems, sol, gg=gg)


def test_solution_json_round_trip(gq_link):
    cx, gg, systems = gq_link
    sol = solve_gluing_equations(cx, systems, EDGE_MODE, gg=gg)
    data = json.loads(json.dumps(sol.to_json(systems)))
    systems2 = systems_from_json(cx, data, gg)
    sol2 = solution_from_json(data)
    assert sol2.mu == sol.mu
    a = build_sigma(cx, systems, sol, gg=gg)
    b = build_sigma(cx, systems2, sol2, gg=gg)
    assert a.to_json() == b.to_json()


def test_sigma_export(gq_link):
    cx, gg, systems = gq_link
    sol = solve_gluing_equations(cx, systems, EDGE_MODE, gg=gg)
    text, sidecar = build_sigma(cx, systems, sol, gg=gg).export()
    meta = json.loads(sidecar)
    assert meta["vertex_count"] == 40 and len(meta["edges"]) == 90
    assert text.strip()


def test_systems_from_json_rejects_non_cutsets(gq_link):
    cx, gg, systems = gq_link
    sol = solve_gluing_equations(cx, systems, EDGE_MODE, gg=gg)
    data = json.loads(json.dumps(sol.to_json(systems)))
    data["systems"][-1]["cutsets"]["cutsets"][0] = data["systems"][-1]["cutsets"]["cutsets"][0][:1]
    with pytest.raises(GluingError):
        systems_from_json(cx, data, gg)


def test_partition_helpers():
    assert canonical_partition(3) == ((0,), (1,), (2,))
    assert len(three_coarsenings()) == 3
