"""Polygonal complexes, links, antipodal graphs and the gluing equations.

Angles are exact rationals in units of pi. A face is a closed walk of darts
``(edge, sign)``; sign ``+1`` runs from the first listed endpoint of the edge
to the second. Corner ``i`` of a face sits at the start of dart ``i``.

Two gluing regimes are supported. In the edge regime the gluing graph is the
antipodal graph and cutsets are edge cutsets of links; in the vertex regime
it is the 1-skeleton and cutsets are vertex cutsets of links.
"""
from __future__ import annotations

import heapq
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Any, Iterable, Sequence

from .certify import (
    CutsetCollection,
    SeparationCertificate,
    check_dagger_separated,
    check_edge_separated,
    check_star_separated,
    check_vertex_separated,
    is_star_cutset,
)
from .cutsets import (
    EDGE,
    VERTEX,
    ComplementPartition,
    Cutset,
    components_minus,
    enumerate_separated_cutsets,
    is_proper,
)
from .graph import MetricGraph, Vertex, connected_components, distances, format_graph
from .solve import Infeasible, positive_kernel

EDGE_MODE = "edge"
VERTEX_MODE = "vertex"
PROPER = "proper-canonical"
DAGGER = "dagger-three-coarsenings"
STAR = "star-canonical"
REGIMES = (PROPER, DAGGER, STAR)

CellRef = tuple[str, int]  # ("v", vertex) or ("m", edge)


class ComplexError(ValueError):
    pass


class GluingError(ValueError):
    pass


class GluingInfeasible(GluingError):
    """``functional`` is nonnegative and nonzero on the (cutset, partition)
    pairs and vanishes on every solution; ``combination`` gives it as a sum
    of equation rows, listed in ``rows``."""

    def __init__(self, message: str, functional: Sequence[Fraction],
                 combination: Sequence[Fraction] = (), rows: Sequence[Sequence[int]] = (),
                 keys: Sequence = ()):
        super().__init__(message)
        self.functional = tuple(functional)
        self.combination = tuple(combination)
        self.rows = tuple(tuple(r) for r in rows)
        self.keys = tuple(keys)


def default_angle(k: int) -> Fraction:
    return Fraction(k - 2, k)


@dataclass(frozen=True)
class Face:
    id: int
    darts: tuple[tuple[int, int], ...]
    angles: tuple[Fraction, ...]

    @property
    def k(self) -> int:
        return len(self.darts)


class PolygonalComplex:
    """A finite 2-complex given combinatorially; loops and multi-edges allowed."""

    def __init__(
        self,
        vertices: Iterable[int],
        edges: Sequence[tuple[int, int]],
        faces: Sequence[Sequence[tuple[int, int]]],
        angles: dict[int, Sequence[Fraction]] | None = None,
    ) -> None:
        self.vertices = tuple(vertices)
        self._vset = set(self.vertices)
        self.edges = tuple((int(a), int(b)) for a, b in edges)
        for a, b in self.edges:
            if a not in self._vset or b not in self._vset:
                raise ComplexError(f"edge ({a}, {b}) has an unknown endpoint")
        angles = angles or {}
        fs = []
        for i, darts in enumerate(faces):
            darts = tuple((int(e), int(s)) for e, s in darts)
            k = len(darts)
            if k < 3:
                raise ComplexError(f"face {i} has fewer than 3 sides")
            for e, s in darts:
                if not 0 <= e < len(self.edges) or s not in (1, -1):
                    raise ComplexError(f"face {i} has a bad dart ({e}, {s})")
            for j in range(k):
                if self.dart_end(darts[j]) != self.dart_start(darts[(j + 1) % k]):
                    raise ComplexError(f"face {i} is not a closed walk at dart {j}")
            ang = tuple(Fraction(a) for a in angles.get(i, [default_angle(k)] * k))
            if len(ang) != k or any(a <= 0 for a in ang):
                raise ComplexError(f"face {i} needs {k} positive angles")
            if sum(ang) != k - 2:
                raise ComplexError(f"angles of face {i} do not sum to ({k}-2)pi")
            fs.append(Face(i, darts, ang))
        self.faces = tuple(fs)
        self._sides: dict[int, list[tuple[int, int]]] = {e: [] for e in range(len(self.edges))}
        for f in self.faces:
            for j, (e, _) in enumerate(f.darts):
                self._sides[e].append((f.id, j))

    # -- darts and ends ---------------------------------------------------
    def dart_start(self, d: tuple[int, int]) -> int:
        a, b = self.edges[d[0]]
        return a if d[1] == 1 else b

    def dart_end(self, d: tuple[int, int]) -> int:
        a, b = self.edges[d[0]]
        return b if d[1] == 1 else a

    @staticmethod
    def leaving_end(d: tuple[int, int]) -> tuple[int, int]:
        return (d[0], 0 if d[1] == 1 else 1)

    @staticmethod
    def arriving_end(d: tuple[int, int]) -> tuple[int, int]:
        return (d[0], 1 if d[1] == 1 else 0)

    def end_vertex(self, end: tuple[int, int]) -> int:
        return self.edges[end[0]][end[1]]

    def ends_at(self, v: int) -> list[tuple[int, int]]:
        return [(e, s) for e, ab in enumerate(self.edges) for s in (0, 1) if ab[s] == v]

    def sides(self, e: int) -> list[tuple[int, int]]:
        """Occurrences ``(face, dart index)`` of edge ``e`` in face boundaries."""
        return list(self._sides[e])

    def corner(self, f: int, i: int) -> tuple[int, tuple[int, int], tuple[int, int]]:
        """Vertex, arriving end and leaving end at corner ``i`` of face ``f``."""
        face = self.faces[f]
        d_in, d_out = face.darts[i - 1], face.darts[i]
        return self.dart_start(d_out), self.arriving_end(d_in), self.leaving_end(d_out)

    @property
    def regular(self) -> bool:
        return all(a == default_angle(f.k) for f in self.faces for a in f.angles)

    def skeleton(self) -> MetricGraph:
        return MetricGraph.from_edges(self.edges, self.vertices, allow_loops=True)

    # -- construction and serialization -----------------------------------
    @classmethod
    def from_triangles(cls, triangles: Iterable[Sequence[int]]) -> PolygonalComplex:
        """Simplicial triangle complex; each triple is oriented as listed."""
        triangles = [tuple(t) for t in triangles]
        verts = sorted({v for t in triangles for v in t})
        eid: dict[tuple[int, int], int] = {}
        for t in triangles:
            for j in range(3):
                a, b = sorted((t[j], t[(j + 1) % 3]))
                eid.setdefault((a, b), len(eid))
        edges = sorted(eid, key=eid.get)
        faces = []
        for t in triangles:
            darts = []
            for j in range(3):
                a, b = t[j], t[(j + 1) % 3]
                darts.append((eid[tuple(sorted((a, b)))], 1 if a < b else -1))
            faces.append(darts)
        return cls(verts, edges, faces)

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "vertices": list(self.vertices),
            "edges": [list(e) for e in self.edges],
            "faces": [],
        }
        for f in self.faces:
            entry: dict[str, Any] = {"darts": [list(d) for d in f.darts]}
            if any(a != default_angle(f.k) for a in f.angles):
                entry["angles"] = [str(a) for a in f.angles]
            out["faces"].append(entry)
        return out

    @classmethod
    def from_json(cls, data: dict | str) -> PolygonalComplex:
        if isinstance(data, str):
            data = json.loads(data)
        edges = [tuple(e) for e in data["edges"]]
        faces, angles = [], {}
        for i, f in enumerate(data["faces"]):
            if isinstance(f, dict) and "darts" in f:
                darts = [tuple(d) for d in f["darts"]]
            else:
                seq = f["boundary"] if isinstance(f, dict) else f
                darts = _darts_from_alternating(seq, edges, i)
            faces.append(darts)
            if isinstance(f, dict) and "angles" in f:
                angles[i] = [Fraction(a) for a in f["angles"]]
        return cls(data["vertices"], edges, faces, angles)


def _darts_from_alternating(seq: Sequence[int], edges: Sequence[tuple[int, int]], i: int):
    if len(seq) % 2:
        raise ComplexError(f"face {i}: boundary must alternate vertices and edges")
    k = len(seq) // 2
    darts = []
    for j in range(k):
        v, e, w = seq[2 * j], seq[2 * j + 1], seq[(2 * j + 2) % len(seq)]
        a, b = edges[e]
        if a == b:
            raise ComplexError(f"face {i}: loop {e} needs an explicit dart")
        if (a, b) == (v, w):
            darts.append((e, 1))
        elif (b, a) == (v, w):
            darts.append((e, -1))
        else:
            raise ComplexError(f"face {i}: edge {e} does not join {v} and {w}")
    return darts


# -- links ------------------------------------------------------------------

@dataclass(frozen=True)
class LinkGraph:
    """Link of a primary vertex or of an edge midpoint, with angular lengths.

    For a primary vertex the link vertices are edge ends and the link edges
    are face corners. For a midpoint the link vertices are the two half-edges
    (0 toward the first endpoint) and the link edges are face sides, each of
    length pi.
    """

    cell: CellRef
    graph: MetricGraph
    ends: tuple[Any, ...]
    corners: tuple[tuple[int, int], ...]

    def vertex_of(self, end) -> int:
        return self.ends.index(end)

    def edge_of(self, corner: tuple[int, int]) -> int:
        return self.corners.index(corner)

    def combinatorial(self) -> MetricGraph:
        g = self.graph
        return MetricGraph.from_edges([(e.u, e.v) for e in g.edges], g.vertices, allow_loops=g.allow_loops)


def link(cx: PolygonalComplex, v: int | CellRef) -> LinkGraph:
    cell = ("v", v) if isinstance(v, int) else tuple(v)
    if cell[0] == "m":
        e = cell[1]
        sides = cx.sides(e)
        g = MetricGraph.from_edges([(0, 1)] * len(sides), [0, 1], [Fraction(1)] * len(sides))
        return LinkGraph(cell, g, ("u-half", "v-half"), tuple(sides))
    v = cell[1]
    if v not in cx._vset:
        raise ComplexError(f"unknown vertex {v}")
    ends = tuple(cx.ends_at(v))
    idx = {x: i for i, x in enumerate(ends)}
    pairs, lengths, corners = [], [], []
    for f in cx.faces:
        for i in range(f.k):
            w, a_in, a_out = cx.corner(f.id, i)
            if w != v:
                continue
            if a_in == a_out:
                raise ComplexError(f"face {f.id} backtracks at corner {i}")
            pairs.append((idx[a_in], idx[a_out]))
            lengths.append(f.angles[i])
            corners.append((f.id, i))
    g = MetricGraph.from_edges(pairs, range(len(ends)), lengths)
    # from_edges sorts endpoints; edge ids follow corner order
    return LinkGraph(cell, g, ends, tuple(corners))


def _dijkstra(g: MetricGraph, src: int, skip: int | None = None) -> tuple[dict[int, Fraction], dict[int, int]]:
    dist = {src: Fraction(0)}
    via: dict[int, int] = {}
    heap = [(Fraction(0), src)]
    while heap:
        d, x = heapq.heappop(heap)
        if d > dist[x]:
            continue
        for eid in g.incident(x):
            if eid == skip:
                continue
            e = g.edges[eid]
            y = e.other(x)
            nd = d + e.length
            if y not in dist or nd < dist[y]:
                dist[y] = nd
                via[y] = eid
                heapq.heappush(heap, (nd, y))
    return dist, via


def angular_distances(g: MetricGraph) -> dict[int, dict[int, Fraction]]:
    return {v: _dijkstra(g, v)[0] for v in g.vertices}


def weighted_girth(g: MetricGraph) -> tuple[Fraction | None, list[int]]:
    """Shortest cycle length in the edge-length metric, with its edges."""
    best, cycle = None, []
    for e in g.edges:
        if e.u == e.v:
            if best is None or e.length < best:
                best, cycle = e.length, [e.id]
            continue
        dist, via = _dijkstra(g, e.u, skip=e.id)
        if e.v not in dist:
            continue
        total = dist[e.v] + e.length
        if best is None or total < best:
            path, x = [e.id], e.v
            while x != e.u:
                path.append(via[x])
                x = g.edges[via[x]].other(x)
            best, cycle = total, sorted(path)
    return best, cycle


def angular_separation(lk: LinkGraph, c: Cutset, dist: dict | None = None) -> Fraction | None:
    """Least angular distance between two members of ``c`` (None if one member)."""
    g = lk.graph
    dist = dist or angular_distances(g)
    inf = None

    def dv(a, b):
        return dist[a].get(b, inf)

    vals = []
    for x, y in combinations(c.members, 2):
        if c.kind == VERTEX:
            d = dv(x, y)
        else:
            ex, ey = g.edges[x], g.edges[y]
            opts = [dv(a, b) for a in (ex.u, ex.v) for b in (ey.u, ey.v)]
            opts = [o for o in opts if o is not None]
            d = min(opts) + ex.length / 2 + ey.length / 2 if opts else None
        if d is not None:
            vals.append(d)
    return min(vals) if vals else None


@dataclass(frozen=True)
class LinkVerdict:
    cell: CellRef
    girth: Fraction | None
    ok: bool
    cycle: tuple[int, ...]

    def to_json(self) -> dict:
        out = {"vertex": self.cell[1], "girth": None if self.girth is None else str(self.girth), "ok": self.ok}
        if not self.ok:
            out["cycle_corners"] = list(self.cycle)
        return out


def check_link_condition(cx: PolygonalComplex) -> list[LinkVerdict]:
    """Gromov's condition: every link cycle has angular length at least 2 pi."""
    out = []
    for v in cx.vertices:
        lk = link(cx, v)
        gth, cyc = weighted_girth(lk.graph)
        ok = gth is None or gth >= 2
        out.append(LinkVerdict(("v", v), gth, ok, tuple(lk.corners[i] for i in cyc) if not ok else ()))
    return out


# -- the gluing graph ---------------------------------------------------------

@dataclass(frozen=True)
class DeltaEnd:
    """One end of a gluing-graph edge: the cell, the link member it crosses,
    and the local directions as ``{label: link vertex}`` (edge regime) or the
    member only (vertex regime)."""

    cell: CellRef
    member: int
    directions: tuple[tuple[Any, int], ...]


@dataclass(frozen=True)
class DeltaEdge:
    id: int
    label: tuple
    tail: DeltaEnd
    head: DeltaEnd

    def end(self, which: int) -> DeltaEnd:
        return self.tail if which == 0 else self.head


@dataclass
class GluingGraph:
    mode: str
    cells: tuple[CellRef, ...]
    edges: tuple[DeltaEdge, ...]
    links: dict[CellRef, LinkGraph]
    crossing: dict[CellRef, dict[int, tuple[int, int]]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.crossing:
            for e in self.edges:
                for w in (0, 1):
                    end = e.end(w)
                    slot = self.crossing.setdefault(end.cell, {})
                    if end.member in slot:
                        raise ComplexError(f"member {end.member} at {end.cell} crossed twice")
                    slot[end.member] = (e.id, w)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "cells": [list(c) for c in self.cells],
            "edges": [
                {"id": e.id, "label": list(e.label), "tail": list(e.tail.cell), "head": list(e.head.cell)}
                for e in self.edges
            ],
        }


def antipodal_graph(cx: PolygonalComplex) -> GluingGraph:
    """Join antipodal boundary cells of every face of the subdivided complex."""
    if not cx.regular:
        raise ComplexError("antipodal pairs need a regular complex")
    links: dict[CellRef, LinkGraph] = {}

    def lk(cell):
        if cell not in links:
            links[cell] = link(cx, cell)
        return links[cell]

    def end_at(f: Face, r: int) -> DeltaEnd:
        # boundary cell r: vertex at start of dart r/2, or midpoint of dart (r-1)/2
        if r % 2 == 0:
            i = r // 2
            v, a_in, a_out = cx.corner(f.id, i)
            L = lk(("v", v))
            dirs = (("fwd", L.vertex_of(a_out)), ("bwd", L.vertex_of(a_in)))
            return DeltaEnd(("v", v), L.edge_of((f.id, i)), dirs)
        j = (r - 1) // 2
        e, s = f.darts[j]
        L = lk(("m", e))
        dirs = (("fwd", 1 if s == 1 else 0), ("bwd", 0 if s == 1 else 1))
        return DeltaEnd(("m", e), L.edge_of((f.id, j)), dirs)

    def relabel(end: DeltaEnd, tail: bool) -> DeltaEnd:
        # the arc after the tail is "A"; the head sees that arc behind it
        names = {"fwd": "A", "bwd": "B"} if tail else {"fwd": "B", "bwd": "A"}
        return DeltaEnd(end.cell, end.member, tuple(sorted((names[k], x) for k, x in end.directions)))

    edges = []
    for f in cx.faces:
        k = f.k
        for p in range(k):
            q = p + k
            edges.append(DeltaEdge(len(edges), ("face", f.id, p), relabel(end_at(f, p), True),
                                   relabel(end_at(f, q), False)))
    cells = sorted({e.end(w).cell for e in edges for w in (0, 1)})
    for c in cells:
        lk(c)
    return GluingGraph(EDGE_MODE, tuple(cells), tuple(edges), links)


def skeleton_graph(cx: PolygonalComplex) -> GluingGraph:
    """The 1-skeleton as gluing graph, each edge oriented first to second endpoint."""
    links = {("v", v): link(cx, v) for v in cx.vertices}
    edges = []
    for e, (a, b) in enumerate(cx.edges):
        ends = []
        for w, x in ((0, a), (1, b)):
            L = links[("v", x)]
            ends.append(DeltaEnd(("v", x), L.vertex_of((e, w)), ()))
        edges.append(DeltaEdge(e, ("edge", e), ends[0], ends[1]))
    return GluingGraph(VERTEX_MODE, tuple(("v", v) for v in cx.vertices), tuple(edges), links)


def gluing_graph(cx: PolygonalComplex, mode: str) -> GluingGraph:
    if mode == EDGE_MODE:
        return antipodal_graph(cx)
    if mode == VERTEX_MODE:
        return skeleton_graph(cx)
    raise ValueError(f"unknown mode {mode!r}")


# -- cutset/partition systems -----------------------------------------------

Partition = tuple[tuple[int, ...], ...]


def canonical_partition(n: int) -> Partition:
    return tuple((i,) for i in range(n))


def three_coarsenings() -> list[Partition]:
    return [((0, 1), (2,)), ((0, 2), (1,)), ((0,), (1, 2))]


@dataclass
class CutPartitionSystem:
    """Cutsets of one link, their chosen partitions, and link weights."""

    cell: CellRef
    link: LinkGraph
    regime: str
    cutsets: CutsetCollection
    weights: tuple[int, ...]
    N: int
    pairs: tuple[tuple[int, Partition], ...]
    certificate: SeparationCertificate | None = None
    _parts: list[ComplementPartition] = field(default_factory=list, repr=False)

    def __post_init__(self) -> None:
        if self.regime not in REGIMES:
            raise GluingError(f"unsupported partition regime {self.regime!r}")
        g = self.link.graph
        self._parts = [components_minus(g, c) for c in self.cutsets.cutsets]
        for k, part in self.pairs:
            n = len(self._parts[k])
            flat = sorted(x for block in part for x in block)
            if flat != list(range(n)) or len(part) < 2:
                raise GluingError(f"partition {part} of cutset {k} is not a coarsening with two or more parts")
        for k in range(len(self.cutsets)):
            listed = sorted(p for kk, p in self.pairs if kk == k)
            n = len(self._parts[k])
            if self.regime == DAGGER:
                if n != 3 or listed != sorted(three_coarsenings()):
                    raise GluingError(f"dagger regime needs the three coarsenings of a 3-component complement (cutset {k})")
            elif listed != [canonical_partition(n)]:
                raise GluingError(f"{self.regime} regime uses only the canonical partition (cutset {k})")

    def component_of(self, k: int, link_vertex: int) -> int:
        return self._parts[k].comp(Vertex(link_vertex))

    def part_of(self, pair: int, link_vertex: int) -> int:
        k, part = self.pairs[pair]
        comp = self.component_of(k, link_vertex)
        for i, block in enumerate(part):
            if comp in block:
                return i
        raise AssertionError("component missing from partition")

    def contains(self, pair: int, member: int) -> bool:
        return member in self.cutsets.cutsets[self.pairs[pair][0]].members

    def to_json(self) -> dict:
        return {
            "cell": list(self.cell),
            "regime": self.regime,
            "cutsets": self.cutsets.to_json(),
            "weights": list(self.weights),
            "N": self.N,
            "pairs": [[k, [list(b) for b in p]] for k, p in self.pairs],
        }


def _angular_clause_ok(lk: LinkGraph, cc: CutsetCollection) -> bool:
    dist = angular_distances(lk.graph)
    for c in cc.cutsets:
        sep = angular_separation(lk, c, dist)
        if sep is not None and sep < 1:
            return False
    return True


def _pairs_for(regime: str, cc: CutsetCollection, g: MetricGraph) -> tuple[tuple[int, Partition], ...]:
    out = []
    for k, c in enumerate(cc.cutsets):
        if regime == DAGGER:
            out += [(k, p) for p in three_coarsenings()]
        else:
            out.append((k, canonical_partition(len(components_minus(g, c)))))
    return tuple(out)


def secondary_system(lk: LinkGraph) -> CutPartitionSystem:
    """The full edge set of a midpoint's cage link, weight 1."""
    g = lk.graph
    cc = CutsetCollection.of([Cutset(EDGE, tuple(range(g.m)), g)])
    return CutPartitionSystem(lk.cell, lk, PROPER, cc, (1,), 1, ((0, canonical_partition(2)),))


def edge_link_system(lk: LinkGraph, cutsets: Sequence[Cutset] | None = None, sigma: int = 3) -> CutPartitionSystem:
    """Weighted edge pi-separation of a primary link.

    The combinatorial certificate is at ``sigma``; angular separation of each
    cutset is re-derived from the corner angles.
    """
    if lk.cell[0] == "m":
        return secondary_system(lk)
    comb = lk.combinatorial()
    if cutsets is None:
        cutsets = enumerate_separated_cutsets(comb, sigma, EDGE, exhaustive=True, min_size=2)
    cc = CutsetCollection.of([Cutset(EDGE, c.members, lk.graph) for c in cutsets])
    cert = check_edge_separated(comb, sigma, CutsetCollection.of([Cutset(EDGE, c.members, comb) for c in cutsets]),
                                weights="solve")
    if not cert.passed or not _angular_clause_ok(lk, cc):
        raise GluingError(f"link at {lk.cell} is not weighted edge pi-separated")
    return CutPartitionSystem(lk.cell, lk, PROPER, cc, tuple(cert.weights), cert.N,
                              _pairs_for(PROPER, cc, lk.graph), cert)


def vertex_link_system(lk: LinkGraph, regime: str = "auto", cutsets: Sequence[Cutset] | None = None) -> CutPartitionSystem:
    """Dagger, star or proper vertex separation of a link, certified."""
    comb = lk.combinatorial()
    if cutsets is None:
        cutsets = enumerate_separated_cutsets(comb, 3, VERTEX, exhaustive=True, min_size=2)
    cutsets = [Cutset(VERTEX, c.members, comb) for c in cutsets]
    table = distances(comb)
    tried = [DAGGER, STAR, PROPER] if regime == "auto" else [regime]
    for reg in tried:
        if reg == DAGGER:
            chosen = [c for c in cutsets if is_proper(comb, c).proper and len(components_minus(comb, c)) == 3]
            if not chosen:
                continue
            cert = check_dagger_separated(comb, CutsetCollection.of(chosen))
        elif reg == STAR:
            chosen = [c for c in cutsets if is_star_cutset(comb, c, table).ok]
            if not chosen:
                continue
            cert = check_star_separated(comb, CutsetCollection.of(chosen), table=table)
        elif reg == PROPER:
            chosen = [c for c in cutsets if is_proper(comb, c).proper]
            if not chosen:
                continue
            cert = check_vertex_separated(comb, 3, CutsetCollection.of(chosen), weights="solve", table=table)
        else:
            raise GluingError(f"unsupported partition regime {reg!r}")
        if not cert.passed:
            continue
        cc = CutsetCollection.of([Cutset(VERTEX, c.members, lk.graph) for c in chosen])
        if not _angular_clause_ok(lk, cc):
            continue
        return CutPartitionSystem(lk.cell, lk, reg, cc, tuple(cert.weights), cert.N,
                                  _pairs_for(reg, cc, lk.graph), cert)
    raise GluingError(f"link at {lk.cell} is not certified in regime {regime!r}")


def build_systems(cx: PolygonalComplex, mode: str, regime: str = "auto",
                  gg: GluingGraph | None = None) -> dict[CellRef, CutPartitionSystem]:
    gg = gg or gluing_graph(cx, mode)
    out = {}
    for cell in gg.cells:
        lk = gg.links[cell]
        if mode == EDGE_MODE:
            out[cell] = edge_link_system(lk)
        else:
            out[cell] = vertex_link_system(lk, regime)
    return out


# -- local partitions and equatability ----------------------------------------

LocalPartition = tuple[tuple[Any, ...], ...]


def _directions(cx: PolygonalComplex, gg: GluingGraph, e: DeltaEdge, which: int) -> list[tuple[Any, int]]:
    end = e.end(which)
    if gg.mode == EDGE_MODE:
        return list(end.directions)
    # vertex regime: one direction per face side on the edge, pointing at
    # the far end of the corner that side makes at this vertex
    edge_id = e.label[1]
    lk = gg.links[end.cell]
    me = lk.ends[end.member]
    out = []
    for f, j in cx.sides(edge_id):
        d = cx.faces[f].darts[j]
        if me == cx.leaving_end(d):
            _, far, _ = cx.corner(f, j)
        else:
            _, _, far = cx.corner(f, (j + 1) % cx.faces[f].k)
        out.append(((f, j), lk.vertex_of(far)))
    return out


def induced_local_partition(
    cx: PolygonalComplex, gg: GluingGraph, e: DeltaEdge, which: int,
    sys: CutPartitionSystem, pair: int,
) -> LocalPartition:
    end = e.end(which)
    if sys.cell != end.cell or not sys.contains(pair, end.member):
        raise GluingError(f"pair {pair} at {sys.cell} does not pass through gluing edge {e.id}")
    blocks: dict[int, list] = {}
    for label, x in _directions(cx, gg, e, which):
        blocks.setdefault(sys.part_of(pair, x), []).append(label)
    return tuple(sorted(tuple(sorted(b)) for b in blocks.values()))


def class_of(cx, gg, e, which, sys, pair) -> LocalPartition:
    return induced_local_partition(cx, gg, e, which, sys, pair)


def equatable(cx, gg, e: DeltaEdge, tail: tuple[CutPartitionSystem, int], head: tuple[CutPartitionSystem, int]) -> bool:
    return (induced_local_partition(cx, gg, e, 0, *tail)
            == induced_local_partition(cx, gg, e, 1, *head))


# -- gluing equations ---------------------------------------------------------

Key = tuple[CellRef, int]


@dataclass
class GluingSolution:
    mode: str
    mu: dict[Key, int]
    path: str
    M: int | None
    class_sums: dict[tuple[int, LocalPartition], int]

    def to_json(self, systems: dict[CellRef, CutPartitionSystem] | None = None) -> dict:
        out: dict[str, Any] = {
            "mode": self.mode,
            "path": self.path,
            "M": self.M,
            "mu": [[list(c), p, m] for (c, p), m in sorted(self.mu.items())],
            "class_sums": sorted({str(s) for s in self.class_sums.values()}, key=int),
        }
        if systems is not None:
            out["systems"] = [systems[c].to_json() for c in sorted(systems)]
        return out


def _incidences(cx, gg, systems) -> dict[tuple[int, int], dict[LocalPartition, list[Key]]]:
    """For each gluing edge end, the pairs through it grouped by class."""
    out = {}
    for e in gg.edges:
        for w in (0, 1):
            end = e.end(w)
            sys = systems.get(end.cell)
            if sys is None:
                raise GluingError(f"no certified system at {end.cell}")
            groups: dict[LocalPartition, list[Key]] = {}
            for p in range(len(sys.pairs)):
                if sys.contains(p, end.member):
                    key = induced_local_partition(cx, gg, e, w, sys, p)
                    groups.setdefault(key, []).append((end.cell, p))
            if not groups:
                raise GluingError(f"no cutset at {end.cell} contains member {end.member}")
            out[(e.id, w)] = groups
    return out


def balance_violations(cx, gg, systems, mu: dict[Key, int], inc=None) -> list[dict]:
    """Exact re-check of every gluing equation; empty when all hold."""
    inc = inc or _incidences(cx, gg, systems)
    bad = []
    for e in gg.edges:
        a, b = inc[(e.id, 0)], inc[(e.id, 1)]
        for key in sorted(set(a) | set(b), key=repr):
            sa = sum(mu[k] for k in a.get(key, []))
            sb = sum(mu[k] for k in b.get(key, []))
            if sa != sb:
                bad.append({"edge": e.id, "class": repr(key), "tail": sa, "head": sb})
    if any(m < 1 for m in mu.values()):
        bad.append({"reason": "non-positive weight"})
    return bad


def _class_sums(gg, inc, mu) -> dict[tuple[int, LocalPartition], int]:
    out = {}
    for e in gg.edges:
        for key, ks in inc[(e.id, 0)].items():
            out[(e.id, key)] = sum(mu[k] for k in ks)
    return out


def solve_gluing_equations(
    cx: PolygonalComplex,
    systems: dict[CellRef, CutPartitionSystem],
    mode: str,
    gg: GluingGraph | None = None,
    scale: str = "lcm",
    method: str = "auto",
) -> GluingSolution:
    """Positive integer weights on (cutset, partition) pairs solving the
    gluing equations, by the constructive paths and then by exact LP.

    ``scale`` picks the common constant for the scaled path: ``"lcm"`` of
    the link sums, or their ``"product"``. ``method`` is ``"auto"``,
    ``"constructive"`` (no fallback) or ``"linear"`` (fallback only).
    """
    if method not in ("auto", "constructive", "linear"):
        raise ValueError(f"unknown method {method!r}")
    gg = gg or gluing_graph(cx, mode)
    if gg.mode != mode:
        raise ValueError("gluing graph mode mismatch")
    for c, s in systems.items():
        if s.certificate is not None and not s.certificate.passed:
            raise GluingError(f"link certificate at {c} did not pass")
    inc = _incidences(cx, gg, systems)
    keys = [(c, p) for c in sorted(systems) for p in range(len(systems[c].pairs))]
    regimes = {s.regime for s in systems.values()}

    # (c) disjoint collections with canonical partitions: mu = 1
    if method != "linear" and regimes == {PROPER} and all(s.cutsets.is_disjoint() for s in systems.values()):
        mu = {k: 1 for k in keys}
        if not balance_violations(cx, gg, systems, mu, inc):
            return GluingSolution(mode, mu, "disjoint", 1, _class_sums(gg, inc, mu))

    # (a)/(b) scale link weights to a common class sum
    need = []
    for s in systems.values():
        need.append(3 * s.N if s.regime == DAGGER else s.N)
    if scale == "lcm":
        M = lcm(*need)
    elif scale == "product":
        M = 1
        for s in systems.values():
            M *= s.N
        if DAGGER in regimes or STAR in regimes:
            M *= 3
    else:
        raise ValueError(f"unknown scale {scale!r}")
    if method != "linear" and all(M % n == 0 for n in need):
        mu = {}
        for c, s in systems.items():
            for p, (k, _) in enumerate(s.pairs):
                m = M * s.weights[k] // s.N
                mu[(c, p)] = m // 3 if s.regime == DAGGER else m
        if not balance_violations(cx, gg, systems, mu, inc):
            path = "scaled" if regimes == {PROPER} else "mixed-thirds"
            return GluingSolution(mode, mu, path, M, _class_sums(gg, inc, mu))

    if method == "constructive":
        raise GluingError("constructive paths do not balance")
    pos = {k: i for i, k in enumerate(keys)}
    rows = []
    for e in gg.edges:
        a, b = inc[(e.id, 0)], inc[(e.id, 1)]
        for key in sorted(set(a) | set(b), key=repr):
            row = [0] * len(keys)
            for k in a.get(key, []):
                row[pos[k]] += 1
            for k in b.get(key, []):
                row[pos[k]] -= 1
            if any(row):
                rows.append(row)
    res = positive_kernel(rows, len(keys))
    if isinstance(res, Infeasible):
        raise GluingInfeasible("gluing equations have no positive solution", res.w, res.z, rows, keys)
    mu = {k: int(res.x[pos[k]]) for k in keys}
    if balance_violations(cx, gg, systems, mu, inc):
        raise AssertionError("linear solution failed the exact re-check")
    return GluingSolution(mode, mu, "linear", None, _class_sums(gg, inc, mu))


# -- the Sigma graph ------------------------------------------------------------

@dataclass
class SigmaGraph:
    vertices: tuple[tuple[Key, int], ...]
    edges: tuple[tuple[int, int, int, LocalPartition], ...]  # tail, head, gluing edge, class
    components: tuple[tuple[int, ...], ...]
    seed: int | None

    def graph(self) -> MetricGraph:
        return MetricGraph.from_edges([(a, b) for a, b, _, _ in self.edges], range(len(self.vertices)),
                                      allow_loops=True)

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "vertex_count": len(self.vertices),
            "edge_count": len(self.edges),
            "components": len(self.components),
            "component_sizes": sorted((len(c) for c in self.components), reverse=True),
            "vertices": [[list(k[0]), k[1], i] for k, i in self.vertices],
            "edges": [[a, b, eid] for a, b, eid, _ in self.edges],
        }

    def export(self, title: str = "Sigma") -> tuple[str, str]:
        """Incidence text plus a JSON label sidecar."""
        return format_graph(self.graph(), title), json.dumps(self.to_json(), indent=1)


def build_sigma(
    cx: PolygonalComplex,
    systems: dict[CellRef, CutPartitionSystem],
    solution: GluingSolution,
    gg: GluingGraph | None = None,
    seed: int | None = None,
) -> SigmaGraph:
    """Splice the weighted pairs along every gluing edge.

    Bijections pair the sorted lists of copies in order; a ``seed`` shuffles
    the head side of every class instead.
    """
    gg = gg or gluing_graph(cx, solution.mode)
    inc = _incidences(cx, gg, systems)
    bad = balance_violations(cx, gg, systems, solution.mu, inc)
    if bad:
        raise GluingError(f"gluing equations fail: {bad[0]}")
    verts = [(k, i) for k in sorted(solution.mu) for i in range(1, solution.mu[k] + 1)]
    index = {v: j for j, v in enumerate(verts)}
    rng = random.Random(seed) if seed is not None else None
    edges = []
    for e in gg.edges:
        a, b = inc[(e.id, 0)], inc[(e.id, 1)]
        for key in sorted(a, key=repr):
            left = [index[(k, i)] for k in sorted(a[key]) for i in range(1, solution.mu[k] + 1)]
            right = [index[(k, i)] for k in sorted(b[key]) for i in range(1, solution.mu[k] + 1)]
            if rng is not None:
                rng.shuffle(right)
            edges.extend((x, y, e.id, key) for x, y in zip(left, right))
    sg = SigmaGraph(tuple(verts), tuple(edges), (), seed)
    g = sg.graph()
    sg.components = tuple(tuple(sorted(c)) for c in connected_components(g))
    return sg


def verify_sigma(
    cx: PolygonalComplex,
    systems: dict[CellRef, CutPartitionSystem],
    solution: GluingSolution,
    sg: SigmaGraph,
    gg: GluingGraph | None = None,
) -> dict[str, bool]:
    """Independent re-check of the Sigma invariants."""
    gg = gg or gluing_graph(cx, solution.mode)
    inc = _incidences(cx, gg, systems)
    out = {}
    out["gluing_equations"] = not balance_violations(cx, gg, systems, solution.mu, inc)
    out["vertex_count"] = len(sg.vertices) == sum(solution.mu.values())

    # link of each Sigma vertex matches its cutset as labelled oriented edges
    at: dict[int, list[tuple[int, int]]] = {j: [] for j in range(len(sg.vertices))}
    for a, b, eid, _ in sg.edges:
        at[a].append((eid, 0))
        at[b].append((eid, 1))
    ok = True
    for j, ((cell, p), _) in enumerate(sg.vertices):
        s = systems[cell]
        members = s.cutsets.cutsets[s.pairs[p][0]].members
        expected = sorted(gg.crossing[cell][m] for m in members)
        if sorted(at[j]) != expected:
            ok = False
            break
    out["link_isomorphic_to_cutset"] = ok
    out["locally_injective"] = all(len(set(v)) == len(v) for v in at.values())

    eq = True
    for a, b, eid, _ in sg.edges:
        e = gg.edges[eid]
        (ca, pa), _ = sg.vertices[a]
        (cb, pb), _ = sg.vertices[b]
        if ca != e.tail.cell or cb != e.head.cell or not equatable(cx, gg, e, (systems[ca], pa), (systems[cb], pb)):
            eq = False
            break
    out["equatable_edges"] = eq

    counts: dict[tuple[int, LocalPartition], int] = {}
    for a, b, eid, _ in sg.edges:
        (ca, pa), _ = sg.vertices[a]
        key = induced_local_partition(cx, gg, gg.edges[eid], 0, systems[ca], pa)
        counts[(eid, key)] = counts.get((eid, key), 0) + 1
    sums = _class_sums(gg, inc, solution.mu)
    out["class_degree"] = counts == {k: v for k, v in sums.items() if v}
    return out


# -- serialization of solutions -------------------------------------------------

def systems_from_json(cx: PolygonalComplex, data: dict, gg: GluingGraph | None = None) -> dict[CellRef, CutPartitionSystem]:
    """Rebuild systems from a solution file, re-checking cutsets on the links."""
    gg = gg or gluing_graph(cx, data["mode"])
    out = {}
    for entry in data["systems"]:
        cell = tuple(entry["cell"])
        lk = gg.links[cell]
        cc = CutsetCollection.from_json(lk.graph, entry["cutsets"])
        for c in cc.cutsets:
            if len(components_minus(lk.graph, c)) < 2:
                raise GluingError(f"listed set at {cell} is not a cutset")
        pairs = tuple((k, tuple(tuple(b) for b in p)) for k, p in entry["pairs"])
        out[cell] = CutPartitionSystem(cell, lk, entry["regime"], cc, tuple(entry["weights"]), entry["N"], pairs)
    return out


def solution_from_json(data: dict) -> GluingSolution:
    mu = {(tuple(c), p): m for c, p, m in data["mu"]}
    return GluingSolution(data["mode"], mu, data["path"], data.get("M"), {})
