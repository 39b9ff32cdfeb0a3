from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import aut, dataset
from oracles import complement_components, doubled_distances
from linksep.certify import (
    FAIL,
    INDETERMINATE,
    PASS,
    CutsetCollection,
    WeightInfeasible,
    WeightSystem,
    check_dagger_separated,
    check_edge_separated,
    check_star_seed,
    check_star_separated,
    check_strong_edge_separated,
    check_vertex_separated,
    member_sums,
    recheck,
    solve_weight_equations,
    weight_rows,
)
from linksep.cutsets import EDGE, VERTEX, Cutset, edge_cutset
from linksep.graph import MetricGraph, cycle_graph
from linksep.symmetry import orbit_closure


def hexagon_pairs(k: int = 3):
    g = cycle_graph(6)
    return g, CutsetCollection.of([edge_cutset(g, [i, i + 3]) for i in range(k)])


def gq_collection():
    d = dataset("GQ")
    return d.graph, CutsetCollection.of(d.primary())


def f26a_closure():
    d = dataset("F26A")
    return d.graph, orbit_closure(d.graph, aut("F26A"), CutsetCollection.of(d.primary()))


def test_gq_edge_separated_not_disjoint():
    g, cc = gq_collection()
    cert = check_edge_separated(g, 3, cc)
    assert cert.verdict == PASS and cert.facts["disjoint"] is False


def test_hexagon_antipodal_pairs():
    g, cc = hexagon_pairs()
    cert = check_edge_separated(g, 3, cc)
    # the three antipodal pairs partition the six edges
    assert cert.verdict == PASS and cert.facts["disjoint"] is True


@pytest.mark.xfail(strict=True, reason="literal claim: antipodal pairs overlap; they partition E(C_6)")
def test_literal_hexagon_pairs_not_disjoint():
    g, cc = hexagon_pairs()
    assert check_edge_separated(g, 3, cc).facts["disjoint"] is False


def test_hexagon_single_pair_fails_coverage():
    g, cc = hexagon_pairs(1)
    cert = check_edge_separated(g, 3, cc)
    assert cert.verdict == FAIL
    assert [c.name for c in cert.failures()] == ["covers"]


def test_gq_strong_edge_separated():
    g, cc = gq_collection()
    assert check_strong_edge_separated(g, 3, cc).verdict == PASS


def test_f40a_strong_edge_separated():
    d = dataset("F40A")
    oc = orbit_closure(d.graph, aut("F40A"), CutsetCollection.of(d.primary()))
    cert = check_strong_edge_separated(d.graph, 3, oc, weights="multiplicity")
    assert cert.verdict == PASS and cert.N is not None


def test_hexagon_single_pair_not_strong():
    g, cc = hexagon_pairs(1)
    cert = check_strong_edge_separated(g, 3, cc)
    assert cert.verdict == FAIL
    ce = cert.clause("separates_far_edge_pairs").counterexample
    assert len(ce["quadruple"]) == 4


def test_strong_check_requires_girth():
    g = MetricGraph.from_edges([(0, 1), (1, 2), (2, 0)])
    with pytest.raises(ValueError):
        check_strong_edge_separated(g, 3, CutsetCollection.of([edge_cutset(g, [0, 1])]))


def test_f24a_vertex_separated():
    d = dataset("F24A")
    cert = check_vertex_separated(d.graph, 3, CutsetCollection.of(d.primary()))
    assert cert.verdict == PASS and cert.facts["conclusion"] == "points"


def test_f48a_far_pair_inside_one_cutset():
    d = dataset("F48A")
    g = d.graph
    cert = check_vertex_separated(g, 3, CutsetCollection.of(d.primary()))
    assert cert.failures() == [cert.clause("far_vertex_pairs_separated")]
    u, v = cert.clause("far_vertex_pairs_separated").counterexample["pair"]
    assert doubled_distances(g)[("v", u)][("v", v)] >= 6
    # disjoint cutsets: the one holding u and v cannot split them, the others
    # leave them in one component
    for c in d.primary():
        comps = complement_components(g, VERTEX, c.members)
        if u in c.members:
            assert v in c.members
        else:
            assert any(("v", u) in x and ("v", v) in x for x in comps)


def test_f48a_weak_vertex_separated():
    d = dataset("F48A")
    assert check_vertex_separated(d.graph, 3, CutsetCollection.of(d.primary()), weak=True).verdict == PASS


@pytest.mark.xfail(strict=True, reason="literal claim: 96 far vertex pairs of F48A are not split")
def test_literal_f48a_vertex_separated():
    d = dataset("F48A")
    assert check_vertex_separated(d.graph, 3, CutsetCollection.of(d.primary())).verdict == PASS


def test_gq_weights_all_one():
    g, cc = gq_collection()
    res = solve_weight_equations(g, cc)
    assert isinstance(res, WeightSystem)
    assert set(res.weights) == {1} and res.N == 2


def test_disjoint_cover_weights():
    g = cycle_graph(6)
    cc = CutsetCollection.of([edge_cutset(g, [0, 3]), edge_cutset(g, [1, 4]), edge_cutset(g, [2, 5])])
    res = solve_weight_equations(g, cc)
    assert res.weights == (1, 1, 1) and res.N == 1


def test_forced_zero_weights_infeasible():
    g = MetricGraph.from_edges([(0, 1), (1, 2), (2, 3)])
    cc = CutsetCollection.of([Cutset(EDGE, (0, 1), g), Cutset(EDGE, (1, 2), g)])
    res = solve_weight_equations(g, cc)
    assert isinstance(res, WeightInfeasible)
    w = res.functional
    assert all(x >= 0 for x in w) and any(x > 0 for x in w)
    rows = weight_rows(g, cc)
    combo = [sum(Fraction(z) * r[j] for z, r in zip(res.combination, rows)) for j in range(len(cc))]
    assert combo == list(w)


def test_weights_require_coverage():
    g = cycle_graph(6)
    with pytest.raises(ValueError):
        solve_weight_equations(g, CutsetCollection.of([edge_cutset(g, [0, 3])]))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(0, 5), min_size=1, max_size=4), min_size=1, max_size=6))
def test_weight_solutions_have_equal_sums(raw):
    g = cycle_graph(6)
    cuts = [edge_cutset(g, sorted(set(r))) for r in raw] + [edge_cutset(g, range(6))]
    cc = CutsetCollection.of(cuts)
    res = solve_weight_equations(g, cc)
    if isinstance(res, WeightSystem):
        assert all(w > 0 for w in res.weights)
        assert set(member_sums(g, cc, res.weights, EDGE).values()) == {res.N}
    else:
        # the functional vanishes on any vector with equal member sums
        assert all(x >= 0 for x in res.functional) and any(res.functional)


@pytest.mark.parametrize("name", ["F24A", "F48A"])
def test_dagger_listed(name):
    d = dataset(name)
    cert = check_dagger_separated(d.graph, CutsetCollection.of(d.primary()))
    assert cert.verdict == PASS and cert.weights == [1] * 4


def test_dagger_rejects_hexagon():
    g, cc = hexagon_pairs()
    cert = check_dagger_separated(g, cc)
    assert cert.verdict == FAIL and cert.clause("trivalent").ok is False


def test_f26a_star_orbit_closure():
    g, oc = f26a_closure()
    cert = check_star_separated(g, oc)
    assert cert.verdict == PASS
    assert all(isinstance(w, int) and w > 0 for w in cert.weights)


def test_star_rejects_hexagon():
    g, _ = hexagon_pairs()
    cc = CutsetCollection.of([Cutset(VERTEX, (0, 3), g)])
    assert check_star_separated(g, cc).clause("trivalent").ok is False


def test_f26a_single_cutset_not_star_separated():
    d = dataset("F26A")
    cert = check_star_separated(d.graph, CutsetCollection.of(d.primary()))
    assert cert.verdict == FAIL


def test_f26a_star_seed_passes():
    d = dataset("F26A")
    cert = check_star_seed(d.graph, 0, d.primary(), group=aut("F26A"))
    assert cert.verdict == PASS
    assert "emitted" in cert.facts


def test_f26a_star_seed_without_seeds_fails():
    d = dataset("F26A")
    cert = check_star_seed(d.graph, 0, [], group=aut("F26A"))
    assert cert.verdict == FAIL
    assert cert.clause("seeds_contain_v1").ok is False


def test_f24a_star_seed_not_pass():
    d = dataset("F24A")
    cert = check_star_seed(d.graph, 0, d.primary(), group=aut("F24A"))
    assert cert.verdict in (FAIL, INDETERMINATE)


def test_strict_diameter_bound_rejects_f26a():
    d = dataset("F26A")
    cert = check_star_seed(d.graph, 0, d.primary(), group=aut("F26A"), max_diameter=4)
    assert cert.verdict == FAIL and cert.facts["diameter"] == 5


def _relabel(g: MetricGraph, perm: list[int]) -> MetricGraph:
    return MetricGraph.from_edges([(perm[g.index(e.u)], perm[g.index(e.v)]) for e in g.edges], range(g.n))


@settings(max_examples=4, deadline=None)
@given(st.randoms(use_true_random=False))
def test_star_verdict_is_labeling_independent(rnd):
    g, oc = f26a_closure()
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = _relabel(g, perm)
    cuts = [Cutset(VERTEX, tuple(sorted(perm[g.index(v)] for v in c.members)), h) for c in oc.cutsets]
    for sub in (oc, CutsetCollection.of(oc.cutsets[:5])):
        moved = CutsetCollection.of([cuts[oc.cutsets.index(c)] for c in sub.cutsets])
        assert check_star_separated(h, moved).verdict == check_star_separated(g, sub).verdict


def test_strong_implies_edge():
    for name in ("GQ", "F40A", "G54"):
        d = dataset(name)
        oc = orbit_closure(d.graph, aut(name), CutsetCollection.of(d.primary()))
        strong = check_strong_edge_separated(d.graph, 3, oc)
        if strong.passed:
            assert check_edge_separated(d.graph, 3, oc).passed


def test_certificates_recheck():
    g, cc = gq_collection()
    for cert in (check_edge_separated(g, 3, cc, weights="solve"), check_strong_edge_separated(g, 3, cc)):
        data = json.loads(json.dumps(cert.to_json()))
        assert recheck(data)


def test_tampered_certificate_fails_recheck():
    g, cc = gq_collection()
    data = json.loads(json.dumps(check_edge_separated(g, 3, cc).to_json()))
    data["collection"]["cutsets"][0] = data["collection"]["cutsets"][0][:1]
    assert not recheck(data)


def test_failed_certificate_never_rechecks():
    g, cc = hexagon_pairs(1)
    assert not recheck(check_edge_separated(g, 3, cc).to_json())


def test_certificate_field_order():
    g, cc = gq_collection()
    keys = list(check_edge_separated(g, 3, cc).to_json())
    assert keys[:4] == ["property", "sigma", "verdict", "clauses"]
