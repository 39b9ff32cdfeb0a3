"""Finite metric multigraphs.

Distances in the combinatorial metric are kept on a doubled integer scale:
one unit is half an edge, so an edge midpoint sits at odd distance from every
vertex and all comparisons against a separation constant are exact.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

INF = 2**62
"""Doubled distance between cells in different components."""


class GraphFormatError(ValueError):
    """Raised for malformed or inconsistent incidence tables."""


@dataclass(frozen=True, order=True)
class Cell:
    """A vertex or an edge midpoint of a graph."""

    kind: str  # "v" or "m"
    id: int

    def __post_init__(self) -> None:
        if self.kind not in ("v", "m"):
            raise ValueError(f"unknown cell kind {self.kind!r}")

    def __repr__(self) -> str:
        return f"x{self.id}" if self.kind == "v" else f"m(e{self.id})"


def Vertex(vid: int) -> Cell:
    return Cell("v", vid)


def Midpoint(eid: int) -> Cell:
    return Cell("m", eid)


@dataclass(frozen=True)
class Edge:
    id: int
    u: int
    v: int
    length: Fraction = Fraction(1)

    def ends(self) -> tuple[int, int]:
        return (self.u, self.v)

    def other(self, x: int) -> int:
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise KeyError(f"vertex {x} is not an endpoint of edge {self.id}")


@dataclass(frozen=True)
class MetricGraph:
    """Undirected multigraph with positive rational edge lengths.

    Vertex ids are arbitrary non-negative integers; edge ids are 0..m-1 in
    the order of ``edges``.
    """

    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]
    allow_loops: bool = False
    _index: dict = field(init=False, repr=False, compare=False)
    _incident: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphFormatError("duplicate vertex id")
        index = {v: i for i, v in enumerate(self.vertices)}
        incident: dict[int, list[int]] = {v: [] for v in self.vertices}
        for pos, e in enumerate(self.edges):
            if e.id != pos:
                raise GraphFormatError("edge ids must be 0..m-1 in order")
            if e.u not in index or e.v not in index:
                raise GraphFormatError(f"edge {e.id} has an unknown endpoint")
            if e.length <= 0:
                raise GraphFormatError(f"edge {e.id} has non-positive length")
            if e.u == e.v:
                if not self.allow_loops:
                    raise GraphFormatError(f"self-loop at {e.u} not permitted")
                incident[e.u].append(e.id)
            else:
                incident[e.u].append(e.id)
                incident[e.v].append(e.id)
        object.__setattr__(self, "_index", index)
        object.__setattr__(
            self, "_incident", {v: tuple(ids) for v, ids in incident.items()}
        )

    @classmethod
    def from_edges(
        cls,
        pairs: Iterable[tuple[int, int]],
        vertices: Iterable[int] | None = None,
        lengths: Sequence[Fraction | int] | None = None,
        allow_loops: bool = False,
    ) -> MetricGraph:
        pairs = [(int(a), int(b)) for a, b in pairs]
        if vertices is None:
            vs = sorted({x for p in pairs for x in p})
        else:
            vs = list(vertices)
        edges = []
        for i, (a, b) in enumerate(pairs):
            ln = Fraction(1) if lengths is None else Fraction(lengths[i])
            edges.append(Edge(i, min(a, b), max(a, b), ln))
        return cls(tuple(vs), tuple(edges), allow_loops)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def index(self, v: int) -> int:
        return self._index[v]

    def has_vertex(self, v: int) -> bool:
        return v in self._index

    def incident(self, v: int) -> tuple[int, ...]:
        return self._incident[v]

    def degree(self, v: int) -> int:
        return len(self._incident[v])

    def neighbors(self, v: int) -> list[int]:
        """Neighbours with multiplicity, in incident-edge order."""
        return [self.edges[e].other(v) for e in self._incident[v]]

    def edges_between(self, a: int, b: int) -> list[int]:
        return [e for e in self._incident[a] if self.edges[e].other(a) == b]

    def edge_id(self, a: int, b: int) -> int:
        ids = self.edges_between(a, b)
        if len(ids) != 1:
            raise KeyError(f"{len(ids)} edges join {a} and {b}")
        return ids[0]

    def is_combinatorial(self) -> bool:
        return all(e.length == 1 for e in self.edges)

    def cells(self) -> list[Cell]:
        return [Vertex(v) for v in self.vertices] + [Midpoint(e.id) for e in self.edges]

    def __iter__(self) -> Iterator[int]:
        return iter(self.vertices)


_LINE = re.compile(r"^\s*(\d+)\s*:\s*((?:\d+\s*)*)$")


def parse_graph(text: str, symmetric_closure: bool = False) -> MetricGraph:
    """Parse an incidence table of lines ``i: j k l``.

    By default every adjacency must be listed from both ends with the same
    multiplicity. With ``symmetric_closure`` an edge may be listed from one
    end only; a neighbour repeated ``c`` times gives ``c`` parallel edges.
    """
    rows: dict[int, list[int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        mt = _LINE.match(line)
        if mt is None:
            raise GraphFormatError(f"line {lineno}: malformed: {raw!r}")
        vid = int(mt.group(1))
        if vid in rows:
            raise GraphFormatError(f"line {lineno}: vertex {vid} listed twice")
        rows[vid] = [int(t) for t in mt.group(2).split()]
    counts: dict[tuple[int, int], list[int]] = {}
    for vid, nbrs in rows.items():
        for w in nbrs:
            if w not in rows:
                raise GraphFormatError(f"vertex {vid} lists unknown vertex {w}")
            if w == vid:
                raise GraphFormatError(f"self-loop at {vid}")
            key = (min(vid, w), max(vid, w))
            slot = 0 if vid == key[0] else 1
            counts.setdefault(key, [0, 0])[slot] += 1
    pairs = []
    for key in sorted(counts):
        a, b = counts[key]
        if a != b and not symmetric_closure:
            raise GraphFormatError(
                f"asymmetric listing between {key[0]} and {key[1]} ({a} vs {b})"
            )
        pairs.extend([key] * max(a, b))
    return MetricGraph.from_edges(pairs, vertices=sorted(rows))


def format_graph(g: MetricGraph, title: str | None = None) -> str:
    lines = [] if title is None else [f"# {title}"]
    for v in g.vertices:
        lines.append(f"{v}: " + " ".join(str(w) for w in sorted(g.neighbors(v))))
    return "\n".join(lines) + "\n"


def _cell_adjacency(g: MetricGraph) -> csr_matrix:
    # vertices occupy rows 0..n-1, midpoints rows n..n+m-1
    n, m = g.n, g.m
    rows, cols = [], []
    for e in g.edges:
        mid = n + e.id
        for x in (e.u, e.v):
            rows += [mid, g.index(x)]
            cols += [g.index(x), mid]
    data = np.ones(len(rows), dtype=np.int8)
    return csr_matrix((data, (rows, cols)), shape=(n + m, n + m))


@dataclass(frozen=True)
class DistanceTable:
    """All-pairs doubled distances over the cells of a graph."""

    graph: MetricGraph
    table: np.ndarray

    def cell_index(self, c: Cell) -> int:
        if c.kind == "v":
            return self.graph.index(c.id)
        return self.graph.n + c.id

    def __call__(self, a: Cell, b: Cell) -> int:
        return int(self.table[self.cell_index(a), self.cell_index(b)])

    def vv(self, a: int, b: int) -> int:
        g = self.graph
        return int(self.table[g.index(a), g.index(b)])

    def mm(self, e: int, f: int) -> int:
        n = self.graph.n
        return int(self.table[n + e, n + f])

    def vertex_block(self) -> np.ndarray:
        n = self.graph.n
        return self.table[:n, :n]

    def midpoint_block(self) -> np.ndarray:
        n = self.graph.n
        return self.table[n:, n:]


def distances(g: MetricGraph) -> DistanceTable:
    """Doubled combinatorial distances between all vertices and midpoints."""
    if not g.is_combinatorial():
        raise ValueError("doubled distances need unit edge lengths")
    if g.n + g.m == 0:
        return DistanceTable(g, np.zeros((0, 0), dtype=np.int64))
    raw = shortest_path(_cell_adjacency(g), method="D", unweighted=True)
    out = np.full(raw.shape, INF, dtype=np.int64)
    finite = np.isfinite(raw)
    out[finite] = raw[finite].astype(np.int64)
    return DistanceTable(g, out)


def girth(g: MetricGraph) -> float | int:
    """Length of a shortest cycle; ``inf`` for forests."""
    if any(e.u == e.v for e in g.edges):
        return 1
    seen_pairs: set[tuple[int, int]] = set()
    for e in g.edges:
        if (e.u, e.v) in seen_pairs:
            return 2
        seen_pairs.add((e.u, e.v))
    best = float("inf")
    for root in g.vertices:
        dist = {root: 0}
        via = {root: -1}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            if 2 * dist[x] >= best:
                break
            for eid in g.incident(x):
                if eid == via[x]:
                    continue
                y = g.edges[eid].other(x)
                if y not in dist:
                    dist[y] = dist[x] + 1
                    via[y] = eid
                    queue.append(y)
                else:
                    best = min(best, dist[x] + dist[y] + 1)
    return best


def connected_components(g: MetricGraph) -> list[list[int]]:
    seen: set[int] = set()
    comps = []
    for s in g.vertices:
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.neighbors(x):
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


def is_connected(g: MetricGraph) -> bool:
    return g.n > 0 and len(connected_components(g)) == 1


def diameter(g: MetricGraph, table: DistanceTable | None = None) -> int:
    """Largest vertex-to-vertex distance (combinatorial units)."""
    if not is_connected(g):
        raise ValueError("diameter of a disconnected graph")
    table = table or distances(g)
    return int(table.vertex_block().max()) // 2


def bipartition(g: MetricGraph) -> dict[int, int] | None:
    """Two-colouring of the vertices, or None if an odd cycle exists."""
    colour: dict[int, int] = {}
    for s in g.vertices:
        if s in colour:
            continue
        colour[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.neighbors(x):
                if y not in colour:
                    colour[y] = 1 - colour[x]
                    queue.append(y)
                elif colour[y] == colour[x]:
                    return None
    return colour


def is_bipartite(g: MetricGraph) -> bool:
    return bipartition(g) is not None


def regular_degree(g: MetricGraph) -> int | None:
    degs = {g.degree(v) for v in g.vertices}
    return degs.pop() if len(degs) == 1 else None


def betti_number(g: MetricGraph) -> int:
    return g.m - g.n + len(connected_components(g))


def subdivide(g: MetricGraph) -> tuple[MetricGraph, list[Cell]]:
    """Split every edge at its midpoint.

    Returns the subdivided graph, whose vertices are ``0..n+m-1``, and the
    list mapping each new vertex to the cell of ``g`` it represents.
    """
    n = g.n
    mapping = [Vertex(v) for v in g.vertices] + [Midpoint(e.id) for e in g.edges]
    pairs, lengths = [], []
    for e in g.edges:
        for x in (e.u, e.v):
            pairs.append((g.index(x), n + e.id))
            lengths.append(e.length / 2)
    sub = MetricGraph.from_edges(pairs, vertices=range(n + g.m), lengths=lengths)
    return sub, mapping


def cycle_graph(k: int) -> MetricGraph:
    return MetricGraph.from_edges([(i, (i + 1) % k) for i in range(k)], range(k))


def cage_graph(k: int) -> MetricGraph:
    """Two vertices joined by ``k`` parallel edges."""
    return MetricGraph.from_edges([(0, 1)] * k, [0, 1])
