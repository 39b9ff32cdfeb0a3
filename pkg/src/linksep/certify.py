"""Separation certificates for graphs with a collection of cutsets.

Every check returns a :class:`SeparationCertificate` whose clauses carry
enough evidence to be re-verified by :func:`recheck` from the serialized
form alone.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

import numpy as np

from .cutsets import (
    EDGE,
    VERTEX,
    ComplementPartition,
    Cutset,
    components_minus,
    is_proper,
    member_ids,
)
from .graph import (
    DistanceTable,
    MetricGraph,
    Midpoint,
    Vertex,
    bipartition,
    diameter,
    distances,
    format_graph,
    girth,
    is_connected,
    parse_graph,
    regular_degree,
)
from .solve import Infeasible, positive_kernel

PASS, FAIL, INDETERMINATE = "pass", "fail", "indeterminate"


@dataclass(frozen=True)
class CutsetCollection:
    """Cutsets of one kind on one host, each with a positive multiplicity."""

    entries: tuple[tuple[Cutset, int], ...]

    def __post_init__(self) -> None:
        kinds = {c.kind for c, _ in self.entries}
        if len(kinds) > 1:
            raise ValueError("mixed cutset kinds in one collection")
        if any(k < 1 for _, k in self.entries):
            raise ValueError("multiplicities must be positive")

    @classmethod
    def of(cls, cutsets: Iterable[Cutset], multiplicities: Iterable[int] | None = None):
        cutsets = list(cutsets)
        mult = [1] * len(cutsets) if multiplicities is None else list(multiplicities)
        return cls(tuple(zip(cutsets, mult)))

    @property
    def cutsets(self) -> list[Cutset]:
        return [c for c, _ in self.entries]

    @property
    def multiplicities(self) -> list[int]:
        return [k for _, k in self.entries]

    @property
    def kind(self) -> str | None:
        return self.entries[0][0].kind if self.entries else None

    def __len__(self) -> int:
        return len(self.entries)

    def is_disjoint(self) -> bool:
        seen: set[int] = set()
        for c in self.cutsets:
            if seen & set(c.members):
                return False
            seen |= set(c.members)
        return True

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "cutsets": [list(c.members) for c in self.cutsets],
            "multiplicities": self.multiplicities,
        }

    @classmethod
    def from_json(cls, g: MetricGraph, data: dict) -> CutsetCollection:
        kind = data["kind"]
        cuts = [Cutset(kind, tuple(m), g) for m in data["cutsets"]]
        return cls.of(cuts, data.get("multiplicities"))


@dataclass(frozen=True)
class WeightSystem:
    weights: tuple[int, ...]
    N: int


@dataclass(frozen=True)
class WeightInfeasible:
    """No positive solution; ``functional`` is nonnegative, nonzero and
    vanishes on every solution of the equations."""

    functional: tuple[Fraction, ...]
    combination: tuple[Fraction, ...]


@dataclass
class Clause:
    name: str
    ok: bool
    witness: Any = None
    counterexample: Any = None

    def to_json(self) -> dict:
        out: dict[str, Any] = {"name": self.name, "ok": self.ok}
        if self.ok and self.witness is not None:
            out["witness"] = self.witness
        if not self.ok and self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class SeparationCertificate:
    property: str
    sigma: int | None
    clauses: list[Clause]
    graph: MetricGraph
    collection: CutsetCollection | None
    weights: list[int] | None = None
    N: int | None = None
    facts: dict = field(default_factory=dict)
    verdict_override: str | None = None

    @property
    def verdict(self) -> str:
        if self.verdict_override is not None:
            return self.verdict_override
        return PASS if all(c.ok for c in self.clauses) else FAIL

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def clause(self, name: str) -> Clause:
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[Clause]:
        return [c for c in self.clauses if not c.ok]

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "property": self.property,
            "sigma": self.sigma,
            "verdict": self.verdict,
            "clauses": [c.to_json() for c in self.clauses],
        }
        if self.weights is not None:
            out["weights"] = list(self.weights)
        if self.N is not None:
            out["N"] = self.N
        out["facts"] = self.facts
        out["graph"] = format_graph(self.graph)
        # edge ids in the collection refer to this order
        out["edge_order"] = [[e.u, e.v] for e in self.graph.edges]
        out["collection"] = self.collection.to_json() if self.collection else None
        return out


# ---------------------------------------------------------------------------
# shared analysis


class _Analysis:
    """Complement partitions and per-cell labels for a whole collection."""

    def __init__(self, g: MetricGraph, cc: CutsetCollection):
        self.g = g
        self.cutsets = cc.cutsets
        self.parts: list[ComplementPartition] = [components_minus(g, c) for c in self.cutsets]
        n = g.n
        self.labels = np.full((len(self.cutsets), n), -1, dtype=np.int64)
        for k, part in enumerate(self.parts):
            for i, v in enumerate(g.vertices):
                self.labels[k, i] = part.label.get(Vertex(v), -1)

    def ncomp(self, k: int) -> int:
        return len(self.parts[k])


def _first_vertex_separator(labels: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Index of the first row separating vertex positions a[i], b[i]; -1 if none."""
    out = np.full(len(a), -1, dtype=np.int64)
    todo = np.arange(len(a))
    for start in range(0, labels.shape[0], 512):
        if not len(todo):
            break
        block = labels[start : start + 512]
        la, lb = block[:, a[todo]], block[:, b[todo]]
        hit = (la >= 0) & (lb >= 0) & (la != lb)
        anyhit = hit.any(axis=0)
        out[todo[anyhit]] = start + hit[:, anyhit].argmax(axis=0)
        todo = todo[~anyhit]
    return out


def _first_pair_separator(labels: np.ndarray, quads: np.ndarray) -> np.ndarray:
    """Rows separating {q0,q1} from {q2,q3} (vertex positions)."""
    out = np.full(len(quads), -1, dtype=np.int64)
    todo = np.arange(len(quads))
    for start in range(0, labels.shape[0], 512):
        if not len(todo):
            break
        block = labels[start : start + 512]
        q = quads[todo]
        l0, l1, l2, l3 = (block[:, q[:, i]] for i in range(4))
        alive = (l0 >= 0) & (l1 >= 0) & (l2 >= 0) & (l3 >= 0)
        hit = alive & (l0 != l2) & (l0 != l3) & (l1 != l2) & (l1 != l3)
        anyhit = hit.any(axis=0)
        out[todo[anyhit]] = start + hit[:, anyhit].argmax(axis=0)
        todo = todo[~anyhit]
    return out


def _base_clauses(
    g: MetricGraph,
    sigma: int,
    cc: CutsetCollection,
    kind: str,
    an: _Analysis,
    table: DistanceTable,
) -> list[Clause]:
    clauses = []
    clauses.append(Clause("connected", is_connected(g)))
    deg1 = [v for v in g.vertices if g.degree(v) == 1]
    clauses.append(Clause("no_degree_one", not deg1, counterexample=deg1[:1] or None))
    wrong = [k for k, c in enumerate(cc.cutsets) if c.kind != kind]
    clauses.append(Clause(f"{kind}_cutsets", bool(cc.entries) and not wrong,
                          counterexample={"index": wrong[0]} if wrong else None))
    small = [k for k, c in enumerate(cc.cutsets) if len(c) < 2]
    clauses.append(Clause("min_size_2", not small,
                          counterexample={"index": small[0]} if small else None))
    bad_sep = None
    for k, c in enumerate(cc.cutsets):
        cells = c.cells()
        for x, y in itertools.combinations(cells, 2):
            if table(x, y) < 2 * sigma:
                bad_sep = {"index": k, "pair": [x.id, y.id], "doubled_distance": table(x, y)}
                break
        if bad_sep:
            break
    clauses.append(Clause("sigma_separated", bad_sep is None, counterexample=bad_sep))
    counts = [an.ncomp(k) for k in range(len(cc))]
    bad = [k for k, n in enumerate(counts) if n < 2]
    clauses.append(Clause("disconnecting", not bad, witness={"components": counts},
                          counterexample={"index": bad[0]} if bad else None))
    covered = set()
    for c in cc.cutsets:
        covered.update(c.members)
    missing = sorted(set(member_ids(g, kind)) - covered)
    clauses.append(Clause("covers", not missing, counterexample={"missing": missing[:10]} if missing else None))
    return clauses


def _proper_clause(g: MetricGraph, cc: CutsetCollection, an: _Analysis) -> Clause:
    for k, c in enumerate(cc.cutsets):
        if an.ncomp(k) < 2:
            return Clause("proper", False, counterexample={"index": k, "reason": "not a cutset"})
        rep = is_proper(g, c, an.parts[k])
        if not rep:
            return Clause("proper", False, counterexample={
                "index": k, "member": rep.member, "cells": [repr(x) for x in rep.pair]})
    return Clause("proper", True)


def _weights_clause(
    g: MetricGraph, cc: CutsetCollection, kind: str, weights
) -> tuple[Clause, list[int] | None, int | None]:
    if weights == "multiplicity":
        weights = cc.multiplicities
    if weights == "solve":
        res = solve_weight_equations(g, cc)
        if isinstance(res, WeightInfeasible):
            return (Clause("weight_equations", False, counterexample={
                "functional": [str(x) for x in res.functional]}), None, None)
        weights = list(res.weights)
    weights = [int(w) for w in weights]
    sums = member_sums(g, cc, weights, kind)
    values = sorted(set(sums.values()))
    ok = len(weights) == len(cc) and all(w > 0 for w in weights) and len(values) == 1
    N = values[0] if ok else None
    ce = None if ok else {"distinct_sums": values[:5]}
    return Clause("weight_equations", ok, witness={"N": N}, counterexample=ce), weights, N


def member_sums(g: MetricGraph, cc: CutsetCollection, weights: Sequence[int], kind: str) -> dict[int, int]:
    sums = {x: 0 for x in member_ids(g, kind)}
    for c, w in zip(cc.cutsets, weights):
        for x in c.members:
            sums[x] += w
    return sums


def _certificate(prop, sigma, clauses, g, cc, weights=None, N=None, facts=None, prefix=True):
    if weights is not None and prefix:
        prop = "weighted_" + prop
    return SeparationCertificate(prop, sigma, clauses, g, cc, weights, N, facts or {})


# ---------------------------------------------------------------------------
# edge separation


def check_edge_separated(
    g: MetricGraph, sigma: int, cc: CutsetCollection, weights=None,
    table: DistanceTable | None = None,
) -> SeparationCertificate:
    """Proper, sigma-separated edge cutsets of size at least two covering E."""
    table = table or distances(g)
    an = _Analysis(g, cc)
    clauses = _base_clauses(g, sigma, cc, EDGE, an, table)
    clauses.append(_proper_clause(g, cc, an))
    w = N = None
    if weights is not None:
        cl, w, N = _weights_clause(g, cc, EDGE, weights)
        clauses.append(cl)
    facts = {"disjoint": cc.is_disjoint()}
    return _certificate("edge_separated", sigma, clauses, g, cc, w, N, facts)


def edge_pair_classes(g: MetricGraph, n: int, table: DistanceTable) -> list[tuple[int, int, tuple[int, int, int, int]]]:
    """Unordered edge pairs {e,f} carrying data (u,u',v,v') with d(u,v) >= n.

    Returns (e, f, (u, u', v, v')) with vertex positions.
    """
    out = []
    vv = table.vertex_block()
    for e in g.edges:
        for f in g.edges:
            if f.id <= e.id:
                continue
            best = None
            for u, u2 in ((e.u, e.v), (e.v, e.u)):
                for v, v2 in ((f.u, f.v), (f.v, f.u)):
                    if vv[g.index(u), g.index(v)] >= 2 * n:
                        best = best or (g.index(u), g.index(u2), g.index(v), g.index(v2))
            if best is not None:
                out.append((e.id, f.id, best))
    return out


def check_strong_edge_separated(
    g: MetricGraph, n: int, cc: CutsetCollection, weights=None,
    table: DistanceTable | None = None,
) -> SeparationCertificate:
    """Finite check: every far-apart pair of edges is split by some cutset.

    Requires girth at least ``2n``, under which the check implies strong
    edge separation at the level of points.
    """
    gth = girth(g)
    if gth < 2 * n:
        raise ValueError(f"girth {gth} is below 2n = {2 * n}")
    table = table or distances(g)
    base = check_edge_separated(g, n, cc, weights, table)
    an = _Analysis(g, cc)
    pairs = edge_pair_classes(g, n, table)
    quads = np.array([q for _, _, q in pairs], dtype=np.int64).reshape(-1, 4)
    hit = _first_pair_separator(an.labels, quads)
    miss = np.nonzero(hit < 0)[0]
    if len(miss):
        e, f, q = pairs[int(miss[0])]
        ce = {"edges": [e, f], "quadruple": [g.vertices[i] for i in q]}
        quad = Clause("separates_far_edge_pairs", False, counterexample=ce)
    else:
        wit = [[e, f, int(k)] for (e, f, _), k in zip(pairs, hit)]
        quad = Clause("separates_far_edge_pairs", True, witness=wit)
    clauses = [c for c in base.clauses if c.name != "weight_equations"]
    clauses.append(quad)
    clauses += [c for c in base.clauses if c.name == "weight_equations"]
    facts = dict(base.facts, girth=gth, far_edge_pairs=len(pairs))
    return _certificate("strong_edge_separated", n, clauses, g, cc, base.weights, base.N, facts)


# ---------------------------------------------------------------------------
# vertex separation


def _neighbour_pair_clause(g: MetricGraph, an: _Analysis) -> Clause:
    triples = []
    for v in g.vertices:
        nb = sorted(set(g.neighbors(v)))
        for w1, w2 in itertools.combinations(nb, 2):
            triples.append((v, w1, w2))
    if not triples:
        return Clause("neighbour_pairs_separated", True, witness=[])
    a = np.array([g.index(t[1]) for t in triples])
    b = np.array([g.index(t[2]) for t in triples])
    hit = _first_vertex_separator(an.labels, a, b)
    miss = np.nonzero(hit < 0)[0]
    if len(miss):
        return Clause("neighbour_pairs_separated", False,
                      counterexample={"vertex_and_neighbours": list(triples[int(miss[0])])})
    return Clause("neighbour_pairs_separated", True,
                  witness=[[*t, int(k)] for t, k in zip(triples, hit)])


def _far_vertex_clause(g: MetricGraph, sigma: int, an: _Analysis, table: DistanceTable) -> Clause:
    vv = table.vertex_block()
    ii, jj = np.nonzero(np.triu(vv >= 2 * sigma, k=1))
    hit = _first_vertex_separator(an.labels, ii, jj)
    miss = np.nonzero(hit < 0)[0]
    if len(miss):
        i, j = int(ii[miss[0]]), int(jj[miss[0]])
        return Clause("far_vertex_pairs_separated", False,
                      counterexample={"pair": [g.vertices[i], g.vertices[j]]})
    wit = [[g.vertices[int(i)], g.vertices[int(j)], int(k)] for i, j, k in zip(ii, jj, hit)]
    return Clause("far_vertex_pairs_separated", True, witness=wit)


def check_vertex_separated(
    g: MetricGraph, sigma: int, cc: CutsetCollection, weak: bool = False,
    weights=None, table: DistanceTable | None = None,
) -> SeparationCertificate:
    """Weak mode checks connectivity and coverage by separated cutsets. Full
    mode also needs every pair of neighbours of a vertex, and every pair of
    vertices at distance at least ``sigma``, to be split by some cutset.

    Point pairs inside edges are covered by the vertex-pair condition only
    when girth is at least ``2 * sigma``; otherwise ``facts["conclusion"]``
    records the weaker vertex-pair statement.
    """
    table = table or distances(g)
    an = _Analysis(g, cc)
    clauses = _base_clauses(g, sigma, cc, VERTEX, an, table)
    facts: dict[str, Any] = {"disjoint": cc.is_disjoint()}
    if not weak:
        clauses.append(_neighbour_pair_clause(g, an))
        clauses.append(_far_vertex_clause(g, sigma, an, table))
        gth = girth(g)
        facts["girth"] = gth
        facts["conclusion"] = "points" if gth >= 2 * sigma else "vertex_pairs"
    facts["proper"] = all(
        an.ncomp(k) >= 2 and bool(is_proper(g, c, an.parts[k])) for k, c in enumerate(cc.cutsets)
    )
    w = N = None
    if weights is not None:
        cl, w, N = _weights_clause(g, cc, VERTEX, weights)
        clauses.append(cl)
    prop = "weak_vertex_separated" if weak else "vertex_separated"
    return _certificate(prop, sigma, clauses, g, cc, w, N, facts)


# ---------------------------------------------------------------------------
# weight equations


def _membership(g: MetricGraph, cc: CutsetCollection, kind: str) -> dict[int, list[int]]:
    rows = {x: [0] * len(cc) for x in member_ids(g, kind)}
    for k, c in enumerate(cc.cutsets):
        for x in c.members:
            rows[x][k] += 1
    return rows


def weight_rows(g: MetricGraph, cc: CutsetCollection) -> list[list[int]]:
    """Differences of consecutive per-member sums."""
    kind = cc.kind
    rows = list(_membership(g, cc, kind).values())
    return [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(rows, rows[1:])]


def _solve(rows: list[list[int]], cc: CutsetCollection, g: MetricGraph):
    res = positive_kernel(rows, len(cc))
    if isinstance(res, Infeasible):
        return WeightInfeasible(res.w, res.z)
    weights = res.x
    sums = set(member_sums(g, cc, weights, cc.kind).values())
    if len(sums) != 1:
        raise ArithmeticError("weight solution failed re-check")
    return WeightSystem(tuple(weights), sums.pop())


def solve_weight_equations(g: MetricGraph, cc: CutsetCollection):
    """Positive integer weights with equal per-member sums, or a proof that
    none exist."""
    if not len(cc):
        raise ValueError("empty collection")
    member = _membership(g, cc, cc.kind)
    missing = [x for x, r in member.items() if not any(r)]
    if missing:
        raise ValueError(f"collection does not cover {cc.kind} {missing[0]}")
    return _solve(weight_rows(g, cc), cc, g)


# ---------------------------------------------------------------------------
# cubic graphs


def cubic_clauses(g: MetricGraph) -> list[Clause]:
    return [
        Clause("connected", is_connected(g)),
        Clause("bipartite", bipartition(g) is not None),
        Clause("trivalent", regular_degree(g) == 3),
    ]


def check_dagger_separated(g: MetricGraph, cc: CutsetCollection) -> SeparationCertificate:
    """Cubic, girth 6 or 8, and a disjoint cover by proper 3-separated vertex
    cutsets with exactly three complement components (weights all 1).

    Whether the collection also splits every pair of neighbours and every
    pair of vertices at distance at least 3 is recorded in the facts.
    """
    clauses = cubic_clauses(g)
    if not all(c.ok for c in clauses):
        return _certificate("dagger_separated", 3, clauses, g, cc)
    gth = girth(g)
    clauses.append(Clause("girth_6_or_8", gth in (6, 8), witness={"girth": gth},
                          counterexample={"girth": gth}))
    if cc.kind != VERTEX or not len(cc):
        clauses.append(Clause("vertex_cutsets", False))
        return _certificate("dagger_separated", 3, clauses, g, cc)
    vs = check_vertex_separated(g, 3, cc, weak=True, weights=[1] * len(cc))
    clauses += [c for c in vs.clauses if c.name not in ("connected",)]
    clauses.append(Clause("disjoint", cc.is_disjoint()))
    an = _Analysis(g, cc)
    clauses.append(_proper_clause(g, cc, an))
    counts = [an.ncomp(k) for k in range(len(cc))]
    clauses.append(Clause("three_components", all(n == 3 for n in counts), witness={"components": counts},
                          counterexample={"components": counts}))
    # the pair conditions of full vertex separation are reported, not required
    table = distances(g)
    nbr = _neighbour_pair_clause(g, an)
    far = _far_vertex_clause(g, 3, an, table)
    facts = {
        "girth": gth,
        "neighbour_pairs_separated": nbr.ok,
        "far_vertex_pairs_separated": far.ok,
        "unseparated_far_vertex_pairs": count_unseparated_far_pairs(g, 3, an, table),
    }
    return _certificate("dagger_separated", 3, clauses, g, cc, [1] * len(cc), vs.N,
                        facts=facts, prefix=False)


def count_unseparated_far_pairs(g: MetricGraph, sigma: int, an: _Analysis, table: DistanceTable) -> int:
    vv = table.vertex_block()
    ii, jj = np.nonzero(np.triu(vv >= 2 * sigma, k=1))
    return int((_first_vertex_separator(an.labels, ii, jj) < 0).sum())


def _neighbour_pairs(g: MetricGraph, v: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(sorted(g.neighbors(v)), 2))


def is_star_cutset(g: MetricGraph, c: Cutset, table: DistanceTable | None = None,
                   part: ComplementPartition | None = None) -> Clause:
    """3-separated vertex cutset, two complement components, and every member
    has two neighbours on different sides."""
    table = table or distances(g)
    if c.kind != VERTEX:
        return Clause("star_cutset", False, counterexample={"reason": "not a vertex cutset"})
    for a, b in itertools.combinations(c.members, 2):
        if table.vv(a, b) < 6:
            return Clause("star_cutset", False, counterexample={"pair": [a, b]})
    part = part or components_minus(g, c)
    if len(part) != 2:
        return Clause("star_cutset", False, counterexample={"components": len(part)})
    for w in c.members:
        labs = {part.label[Midpoint(e)] for e in g.incident(w)}
        if len(labs) < 2:
            return Clause("star_cutset", False, counterexample={"one_sided_member": w})
    return Clause("star_cutset", True)


def star_pair_table(g: MetricGraph, cc: CutsetCollection, an: _Analysis | None = None):
    """For each (v, {a,b}) the indices of cutsets through v keeping a, b together."""
    an = an or _Analysis(g, cc)
    table: dict[tuple[int, tuple[int, int]], list[int]] = {}
    for v in g.vertices:
        for p in _neighbour_pairs(g, v):
            table[(v, p)] = []
    for k, c in enumerate(cc.cutsets):
        part = an.parts[k]
        for v in c.members:
            for a, b in _neighbour_pairs(g, v):
                la = part.label.get(Vertex(a))
                lb = part.label.get(Vertex(b))
                if la is not None and la == lb:
                    table[(v, (a, b))].append(k)
    return table


def star_weight_rows(g: MetricGraph, cc: CutsetCollection, an: _Analysis | None = None) -> list[list[int]]:
    """Weight equations plus 3 * pair-sum(v, p) - total(v) = 0."""
    rows = weight_rows(g, cc)
    pt = star_pair_table(g, cc, an)
    member = _membership(g, cc, VERTEX)
    for (v, _), ks in pt.items():
        row = [-x for x in member[v]]
        for k in ks:
            row[k] += 3
        rows.append(row)
    return rows


def solve_star_weights(g: MetricGraph, cc: CutsetCollection, an: _Analysis | None = None):
    return _solve(star_weight_rows(g, cc, an), cc, g)


def check_star_separated(
    g: MetricGraph, cc: CutsetCollection, weights=None, table: DistanceTable | None = None,
) -> SeparationCertificate:
    """Definitional check of *-separation.

    ``weights`` may be a sequence, ``"multiplicity"``, or ``None`` to
    synthesize weights from the weight and pair-sum equations. Neighbour
    pairs are unordered, so no labelling of neighbours is needed.
    """
    clauses = cubic_clauses(g)
    if not all(c.ok for c in clauses):
        return _certificate("star_separated", 3, clauses, g, cc)
    table = table or distances(g)
    an = _Analysis(g, cc)
    bad = None
    for k, c in enumerate(cc.cutsets):
        cl = is_star_cutset(g, c, table, an.parts[k])
        if not cl.ok:
            bad = dict(cl.counterexample, index=k)
            break
    clauses.append(Clause("star_cutsets", bad is None and len(cc) > 0, counterexample=bad))
    vs = check_vertex_separated(g, 3, cc, table=table)
    clauses += [c for c in vs.clauses if c.name != "connected"]
    pt = star_pair_table(g, cc, an)
    empty = [[v, list(p)] for (v, p), ks in pt.items() if not ks]
    clauses.append(Clause("pair_classes_nonempty", not empty,
                          witness=[[v, list(p), ks[0]] for (v, p), ks in pt.items() if ks] if not empty else None,
                          counterexample={"vertex_pair": empty[0]} if empty else None))
    if weights is None:
        res = solve_star_weights(g, cc, an) if not empty else None
        if isinstance(res, WeightSystem):
            weights = list(res.weights)
        else:
            ce = {"functional": [str(x) for x in res.functional]} if res else {"reason": "empty pair class"}
            clauses.append(Clause("pair_sums", False, counterexample=ce))
            return _certificate("star_separated", 3, clauses, g, cc)
    elif weights == "multiplicity":
        weights = cc.multiplicities
    weights = [int(w) for w in weights]
    totals = member_sums(g, cc, weights, VERTEX)
    M = totals[g.vertices[0]]
    bad_pair = None
    for (v, p), ks in pt.items():
        s = sum(weights[k] for k in ks)
        if 3 * s != M or totals[v] != M:
            bad_pair = {"vertex": v, "pair": list(p), "sum": s, "M": M}
            break
    ok = bad_pair is None and all(w > 0 for w in weights)
    clauses.append(Clause("pair_sums", ok, witness={"M": M}, counterexample=bad_pair))
    return _certificate("star_separated", 3, clauses, g, cc, weights, M if ok else None, prefix=False)


def _vertex_transitive_clause(g: MetricGraph, grp) -> Clause:
    """Witness: for each vertex one automorphism taking the first vertex there."""
    reps: dict[int, tuple[int, ...]] = {}
    for p in grp.elements:
        reps.setdefault(p[0], p)
    ok = len(reps) == g.n
    wit = [list(reps[i]) for i in range(g.n)] if ok else None
    missing = [g.vertices[i] for i in range(g.n) if i not in reps]
    return Clause("vertex_transitive", ok, witness=wit,
                  counterexample={"unreached": missing[:5]} if missing else None)


def far_set(g: MetricGraph, v: int, table: DistanceTable | None = None) -> list[int]:
    """D(v): vertices at distance at least 5 from ``v``."""
    table = table or distances(g)
    return [w for w in g.vertices if table.vv(v, w) >= 10]


def check_star_seed(
    g: MetricGraph,
    v1: int,
    seeds: Sequence[Cutset],
    group=None,
    subgroup=None,
    assume_good: bool = False,
    labeling: Sequence[int] | None = None,
    max_diameter: int = 6,
) -> SeparationCertificate:
    """Seed criterion for *-separation of a good cubic graph.

    ``labeling`` lists the neighbours of ``v1`` as (w1, w2, w3); the default
    is increasing vertex id. Every vertex ``u`` at distance at least 5 from
    w1 must lie in a different complement component from w3 for some seed.
    The covering argument treats distances 3 to 6, so the diameter bound
    checked here is ``max_diameter`` (6 by default).

    On a pass the certificate facts carry the collection H·A ∪ H·γA, where H
    acts regularly on edges and γ takes v1 to w1.
    """
    from .symmetry import (
        automorphisms,
        find_edge_regular_subgroup,
        orbit_closure,
    )

    table = distances(g)
    clauses = cubic_clauses(g)
    cubic = all(c.ok for c in clauses)
    facts: dict[str, Any] = {}
    if cubic:
        gth = girth(g)
        clauses.append(Clause("girth_6_or_8", gth in (6, 8), witness={"girth": gth},
                              counterexample={"girth": gth}))
        diam = diameter(g, table)
        facts["diameter"] = diam
        clauses.append(Clause("diameter_bound", diam <= max_diameter,
                              witness={"diameter": diam, "bound": max_diameter},
                              counterexample={"diameter": diam, "bound": max_diameter}))
        grp = group or automorphisms(g)
        clauses.append(_vertex_transitive_clause(g, grp))
    if not cubic or not all(c.ok for c in clauses):
        return _certificate("star_seed", 3, clauses, g, None, facts=facts)

    status = "unknown"
    if subgroup is None and not assume_good:
        res = find_edge_regular_subgroup(g, grp)
        status, subgroup = res.status, res.group
    elif subgroup is not None:
        status = "yes"
    elif assume_good:
        status = "assumed"
    facts["edge_regular_subgroup"] = status
    sub_wit = {"status": status}
    if subgroup is not None:
        sub_wit.update(order=subgroup.order, generators=[list(p) for p in subgroup.generators])
    clauses.append(Clause("edge_regular_subgroup", status in ("yes", "assumed"),
                          witness=sub_wit, counterexample={"status": status}))

    nb = list(labeling) if labeling is not None else sorted(g.neighbors(v1))
    w1, w3 = nb[0], nb[2]
    D = far_set(g, w1, table)
    facts.update({"v1": v1, "labeling": nb, "D": D})
    seeds = list(seeds)
    ok_seeds = bool(seeds) and all(v1 in s for s in seeds)
    clauses.append(Clause("seeds_contain_v1", ok_seeds,
                          counterexample={"reason": "no seeds" if not seeds else "seed misses v1"}))
    bad = None
    for k, s in enumerate(seeds):
        cl = is_star_cutset(g, s, table)
        if not cl.ok:
            bad = dict(cl.counterexample, index=k)
            break
    clauses.append(Clause("seeds_are_star_cutsets", bad is None and ok_seeds, counterexample=bad))
    parts = [components_minus(g, s) for s in seeds]
    cover, uncovered = [], []
    for u in D:
        k = next((k for k, p in enumerate(parts)
                  if Vertex(u) in p.label and Vertex(w3) in p.label
                  and p.label[Vertex(u)] != p.label[Vertex(w3)]), None)
        if k is None:
            uncovered.append(u)
        else:
            cover.append([u, k])
    clauses.append(Clause("far_set_covered", not uncovered and ok_seeds, witness=cover,
                          counterexample={"uncovered": uncovered}))
    verdict = None
    others_ok = all(c.ok for c in clauses if c.name != "edge_regular_subgroup")
    if others_ok and status == "unknown":
        verdict = INDETERMINATE
    emitted = None
    if all(c.ok for c in clauses) and subgroup is not None:
        gamma = next(p for p in grp.elements if p[g.index(v1)] == g.index(w1))
        from .symmetry import image_cutset

        seeds_all = seeds + [image_cutset(g, gamma, s) for s in seeds]
        emitted = orbit_closure(g, subgroup, CutsetCollection.of(seeds_all))
        facts["emitted"] = emitted.to_json()
    cert = _certificate("star_seed", 3, clauses, g, CutsetCollection.of(seeds) if seeds else None, facts=facts)
    cert.verdict_override = verdict
    return cert


# ---------------------------------------------------------------------------
# independent re-verification


def recheck(data: dict) -> bool:
    """Re-verify a serialized pass certificate from its own contents.

    Each clause is re-derived from the embedded graph, collection and the
    witnesses, using union-find complements rather than the label matrices
    used during certification.
    """
    if data.get("verdict") != PASS:
        return False
    g = parse_graph(data["graph"])
    if "edge_order" in data:
        h = MetricGraph.from_edges(data["edge_order"], g.vertices)
        if sorted((e.u, e.v) for e in h.edges) != sorted((e.u, e.v) for e in g.edges):
            return False
        g = h
    coll = data.get("collection")
    cc = CutsetCollection.from_json(g, coll) if coll else None
    sigma = data.get("sigma")
    table = distances(g)
    clauses = {c["name"]: c for c in data["clauses"]}
    if not all(c["ok"] for c in data["clauses"]):
        return False
    parts = {}

    def part(k: int) -> ComplementPartition:
        if k not in parts:
            parts[k] = components_minus(g, cc.cutsets[k])
        return parts[k]

    def apart(k: int, a: int, b: int) -> bool:
        p = part(k)
        la, lb = p.label.get(Vertex(a)), p.label.get(Vertex(b))
        return la is not None and lb is not None and la != lb

    for name in clauses:
        if name == "connected" and not is_connected(g):
            return False
        if name == "no_degree_one" and any(g.degree(v) == 1 for v in g.vertices):
            return False
        if name == "bipartite" and bipartition(g) is None:
            return False
        if name == "trivalent" and regular_degree(g) != 3:
            return False
        if name == "girth_6_or_8" and girth(g) not in (6, 8):
            return False
        if name in ("edge_cutsets", "vertex_cutsets"):
            if cc is None or cc.kind != name.split("_")[0]:
                return False
        if name == "min_size_2" and any(len(c) < 2 for c in cc.cutsets):
            return False
        if name == "sigma_separated":
            for c in cc.cutsets:
                for x, y in itertools.combinations(c.cells(), 2):
                    if table(x, y) < 2 * sigma:
                        return False
        if name == "disconnecting":
            if any(len(part(k)) < 2 for k in range(len(cc))):
                return False
        if name == "covers":
            cov = set().union(*(set(c.members) for c in cc.cutsets))
            if cov != set(member_ids(g, cc.kind)):
                return False
        if name == "proper":
            if not all(is_proper(g, c, part(k)) for k, c in enumerate(cc.cutsets)):
                return False
        if name == "disjoint" and not cc.is_disjoint():
            return False
        if name == "three_components" and any(len(part(k)) != 3 for k in range(len(cc))):
            return False
        if name == "separates_far_edge_pairs":
            if not _recheck_far_edges(g, sigma, table, clauses[name]["witness"], part):
                return False
        if name == "neighbour_pairs_separated":
            wit = {(v, a, b): k for v, a, b, k in clauses[name]["witness"]}
            for v in g.vertices:
                for a, b in itertools.combinations(sorted(set(g.neighbors(v))), 2):
                    k = wit.get((v, a, b))
                    if k is None or not apart(k, a, b):
                        return False
        if name == "far_vertex_pairs_separated":
            wit = {(a, b): k for a, b, k in clauses[name]["witness"]}
            for a, b in itertools.combinations(g.vertices, 2):
                if table.vv(a, b) >= 2 * sigma:
                    k = wit.get((a, b), wit.get((b, a)))
                    if k is None or not apart(k, a, b):
                        return False
        if name == "weight_equations":
            sums = set(member_sums(g, cc, data["weights"], cc.kind).values())
            if sums != {data["N"]} or min(data["weights"]) < 1:
                return False
        if name == "star_cutsets":
            for k, c in enumerate(cc.cutsets):
                if not is_star_cutset(g, c, table, part(k)).ok:
                    return False
        if name == "pair_sums":
            if not _recheck_pair_sums(g, cc, data["weights"], data["N"], part):
                return False
        if name == "diameter_bound":
            w = clauses[name]["witness"]
            if diameter(g, table) != w["diameter"] or w["diameter"] > w["bound"]:
                return False
        if name == "vertex_transitive":
            if not _recheck_vertex_transitive(g, clauses[name]["witness"]):
                return False
        if name == "edge_regular_subgroup":
            w = clauses[name]["witness"]
            if w["status"] != "assumed" and not _recheck_edge_regular(g, w):
                return False
        if name == "seeds_contain_v1":
            if not cc or any(data["facts"]["v1"] not in c.members for c in cc.cutsets):
                return False
        if name == "seeds_are_star_cutsets":
            if not all(is_star_cutset(g, c, table, part(k)).ok for k, c in enumerate(cc.cutsets)):
                return False
        if name == "far_set_covered":
            for u, k in clauses[name]["witness"]:
                w3 = data["facts"]["labeling"][2]
                if not apart(k, u, w3):
                    return False
            w1 = data["facts"]["labeling"][0]
            if sorted(u for u, _ in clauses[name]["witness"]) != far_set(g, w1, table):
                return False
    return True


def _recheck_far_edges(g, n, table, witness, part) -> bool:
    wit = {(e, f): k for e, f, k in witness}
    for e in g.edges:
        for f in g.edges:
            if f.id <= e.id:
                continue
            far = any(table.vv(u, v) >= 2 * n for u in (e.u, e.v) for v in (f.u, f.v))
            if not far:
                continue
            k = wit.get((e.id, f.id))
            if k is None:
                return False
            p = part(k)
            left = {p.label.get(Vertex(x)) for x in (e.u, e.v)}
            right = {p.label.get(Vertex(x)) for x in (f.u, f.v)}
            if None in left or None in right or left & right:
                return False
    return True


def _recheck_pair_sums(g, cc, weights, M, part) -> bool:
    if M is None or min(weights) < 1:
        return False
    for v in g.vertices:
        total = 0
        pair_sum = {p: 0 for p in itertools.combinations(sorted(g.neighbors(v)), 2)}
        for k, c in enumerate(cc.cutsets):
            if v not in c.members:
                continue
            total += weights[k]
            lab = part(k).label
            for a, b in pair_sum:
                if lab.get(Vertex(a)) is not None and lab.get(Vertex(a)) == lab.get(Vertex(b)):
                    pair_sum[(a, b)] += weights[k]
        if total != M or any(3 * s != M for s in pair_sum.values()):
            return False
    return True


def _recheck_vertex_transitive(g, witness) -> bool:
    from .symmetry import is_automorphism

    if witness is None or len(witness) != g.n:
        return False
    return all(p[0] == i and is_automorphism(g, tuple(p)) for i, p in enumerate(witness))


def _recheck_edge_regular(g, witness) -> bool:
    from .symmetry import _edge_lookup, closure, edge_permutation, is_automorphism

    gens = [tuple(p) for p in witness.get("generators", [])]
    if not all(is_automorphism(g, p) for p in gens):
        return False
    elems = closure(gens, g.n, limit=g.m)
    if len(elems) != g.m:
        return False
    col = bipartition(g)
    lookup = _edge_lookup(g)
    ident = tuple(range(g.n))
    images = set()
    for p in elems:
        if any(col[g.vertices[p[i]]] != col[g.vertices[i]] for i in range(g.n)):
            return False
        q = edge_permutation(g, p, lookup)
        if p != ident and any(q[e] == e for e in range(g.m)):
            return False
        images.add(q[0])
    return len(images) == g.m
