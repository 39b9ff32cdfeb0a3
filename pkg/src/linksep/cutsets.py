"""Cutsets, complement components and the separated-cutset search.

A set of edges (or vertices) is removed topologically: deleting an edge
removes its midpoint only, deleting a vertex leaves its incident open edges
behind. Two members are ``sigma``-separated when their doubled distance is at
least ``2 * sigma``; the dual graph joins members that are too close, so its
independent sets are exactly the separated subsets.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .graph import Cell, DistanceTable, MetricGraph, Midpoint, Vertex, distances

EDGE = "edge"
VERTEX = "vertex"


class SearchLimitError(RuntimeError):
    """The search hit ``max_results``; ``partial`` holds what was found."""

    def __init__(self, message: str, partial: list[Cutset]):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class Cutset:
    kind: str
    members: tuple[int, ...]
    host: MetricGraph | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.kind not in (EDGE, VERTEX):
            raise ValueError(f"unknown cutset kind {self.kind!r}")
        object.__setattr__(self, "members", tuple(sorted(set(self.members))))
        if not self.members:
            raise ValueError("a cutset needs at least one member")
        g = self.host
        if g is not None:
            for x in self.members:
                ok = 0 <= x < g.m if self.kind == EDGE else g.has_vertex(x)
                if not ok:
                    raise ValueError(f"{self.kind} {x} not in host graph")

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self.members

    def cells(self) -> list[Cell]:
        make = Midpoint if self.kind == EDGE else Vertex
        return [make(x) for x in self.members]


def edge_cutset(g: MetricGraph, members: Iterable[int]) -> Cutset:
    return Cutset(EDGE, tuple(members), g)


def vertex_cutset(g: MetricGraph, members: Iterable[int]) -> Cutset:
    return Cutset(VERTEX, tuple(members), g)


@dataclass(frozen=True)
class ComplementPartition:
    """Connected components of the topological complement of a cutset."""

    components: tuple[frozenset[Cell], ...]
    touches: tuple[frozenset[int], ...]
    label: dict[Cell, int]

    def __len__(self) -> int:
        return len(self.components)

    def comp(self, c: Cell) -> int:
        return self.label[c]

    def vertex_labels(self, g: MetricGraph) -> np.ndarray:
        """Component index per vertex position; -1 for deleted vertices."""
        out = np.full(g.n, -1, dtype=np.int64)
        for i, v in enumerate(g.vertices):
            out[i] = self.label.get(Vertex(v), -1)
        return out


class _UnionFind:
    def __init__(self, items: Iterable) -> None:
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def components_minus(g: MetricGraph, c: Cutset) -> ComplementPartition:
    members = set(c.members)
    if c.kind == EDGE:
        alive = [Vertex(v) for v in g.vertices]
        alive += [Midpoint(e.id) for e in g.edges if e.id not in members]
    else:
        alive = [Vertex(v) for v in g.vertices if v not in members]
        alive += [Midpoint(e.id) for e in g.edges]
    uf = _UnionFind(alive)
    for e in g.edges:
        if c.kind == EDGE and e.id in members:
            continue
        for x in (e.u, e.v):
            if c.kind == VERTEX and x in members:
                continue
            uf.union(Midpoint(e.id), Vertex(x))
    groups: dict[Cell, list[Cell]] = {}
    for cell in alive:
        groups.setdefault(uf.find(cell), []).append(cell)
    comps = sorted((frozenset(cells) for cells in groups.values()), key=min)
    label = {cell: i for i, comp in enumerate(comps) for cell in comp}
    touched: list[set[int]] = [set() for _ in comps]
    for x in c.members:
        if c.kind == EDGE:
            e = g.edges[x]
            near = [Vertex(e.u), Vertex(e.v)]
        else:
            near = [Midpoint(eid) for eid in g.incident(x)]
        for cell in near:
            if cell in label:
                touched[label[cell]].add(x)
    return ComplementPartition(tuple(comps), tuple(frozenset(t) for t in touched), label)


def is_cutset(g: MetricGraph, c: Cutset) -> bool:
    return len(components_minus(g, c)) >= 2


@dataclass(frozen=True)
class ProperReport:
    proper: bool
    member: int | None = None
    pair: tuple[Cell, Cell] | None = None

    def __bool__(self) -> bool:
        return self.proper


def is_proper(
    g: MetricGraph, c: Cutset, part: ComplementPartition | None = None
) -> ProperReport:
    """Check the properness condition, returning a witness on failure.

    Edge members need their two endpoints in different components. Vertex
    members need the open edges towards any two distinct neighbours in
    different components.
    """
    part = part or components_minus(g, c)
    if len(part) < 2:
        raise ValueError("not a cutset: complement is connected")
    for x in c.members:
        if c.kind == EDGE:
            e = g.edges[x]
            a, b = Vertex(e.u), Vertex(e.v)
            if e.u == e.v or part.comp(a) == part.comp(b):
                return ProperReport(False, x, (a, b))
        else:
            inc = g.incident(x)
            for e1, e2 in itertools.combinations(inc, 2):
                if g.edges[e1].other(x) == g.edges[e2].other(x):
                    continue
                a, b = Midpoint(e1), Midpoint(e2)
                if part.comp(a) == part.comp(b):
                    return ProperReport(False, x, (a, b))
    return ProperReport(True)


def member_cells(g: MetricGraph, mode: str) -> list[Cell]:
    if mode == EDGE:
        return [Midpoint(e.id) for e in g.edges]
    if mode == VERTEX:
        return [Vertex(v) for v in g.vertices]
    raise ValueError(f"unknown mode {mode!r}")


def member_ids(g: MetricGraph, mode: str) -> list[int]:
    return [c.id for c in member_cells(g, mode)]


def member_distance_block(table: DistanceTable, mode: str) -> np.ndarray:
    return table.midpoint_block() if mode == EDGE else table.vertex_block()


def is_separated(
    g: MetricGraph, c: Cutset, sigma: int, table: DistanceTable | None = None
) -> bool:
    table = table or distances(g)
    cells = c.cells()
    return all(table(a, b) >= 2 * sigma for a, b in itertools.combinations(cells, 2))


@dataclass(frozen=True)
class DualGraph:
    """Members of I(Γ) joined when closer than ``sigma``."""

    mode: str
    sigma: int
    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def adjacency_masks(self) -> list[int]:
        pos = {x: i for i, x in enumerate(self.nodes)}
        masks = [0] * len(self.nodes)
        for a, b in self.edges:
            masks[pos[a]] |= 1 << pos[b]
            masks[pos[b]] |= 1 << pos[a]
        return masks

    def is_independent(self, subset: Iterable[int]) -> bool:
        chosen = set(subset)
        return not any(a in chosen and b in chosen for a, b in self.edges)


def build_dual(
    g: MetricGraph, sigma: int, mode: str, table: DistanceTable | None = None
) -> DualGraph:
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    table = table or distances(g)
    nodes = member_ids(g, mode)
    block = member_distance_block(table, mode)
    close = block < 2 * sigma
    edges = [
        (nodes[i], nodes[j])
        for i, j in zip(*np.nonzero(np.triu(close, k=1)))
    ]
    return DualGraph(mode, sigma, tuple(nodes), tuple(edges))


class _CutTester:
    """Fast disconnection test on bitmasks over member positions."""

    def __init__(self, g: MetricGraph, mode: str) -> None:
        self.g = g
        self.mode = mode
        self.inc = [
            [(e, g.index(g.edges[e].other(v))) for e in g.incident(v)]
            for v in g.vertices
        ]
        self.ends = [(g.index(e.u), g.index(e.v)) for e in g.edges]

    def disconnects(self, mask: int) -> bool:
        n = self.g.n
        if self.mode == EDGE:
            if mask == 0 or n == 0:
                return False
            seen = 1
            stack = [0]
            while stack:
                x = stack.pop()
                for e, y in self.inc[x]:
                    if not (mask >> e) & 1 and not (seen >> y) & 1:
                        seen |= 1 << y
                        stack.append(y)
            return seen != (1 << n) - 1
        # vertex mode: surviving vertices plus open edges
        pieces = 0
        for a, b in self.ends:
            if (mask >> a) & 1 and (mask >> b) & 1:
                pieces += 1  # open edge floating on its own
        alive = ((1 << n) - 1) & ~mask
        if alive:
            start = (alive & -alive).bit_length() - 1
            seen = 1 << start
            stack = [start]
            while stack:
                x = stack.pop()
                for _, y in self.inc[x]:
                    if (alive >> y) & 1 and not (seen >> y) & 1:
                        seen |= 1 << y
                        stack.append(y)
            pieces += 1 + (seen != alive)
        return pieces >= 2


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _maximal_separated_sets(
    compat: list[int], accept
) -> Iterable[int]:
    """Maximal cliques of the compatibility graph, pruned by ``accept``.

    ``accept(mask)`` must be monotone (true on supersets of accepted sets);
    branches whose reachable union is rejected are cut.
    """
    full = (1 << len(compat)) - 1

    def expand(r: int, p: int, x: int):
        if not accept(r | p):
            return
        if p == 0:
            if x == 0:
                yield r
            return
        pivot_pool = p | x
        pivot = max(_bits(pivot_pool), key=lambda u: (compat[u] & p).bit_count())
        for u in _bits(p & ~compat[pivot]):
            yield from expand(r | (1 << u), p & compat[u], x & compat[u])
            p &= ~(1 << u)
            x |= 1 << u

    yield from expand(0, full, 0)


def enumerate_separated_cutsets(
    g: MetricGraph,
    sigma: int,
    mode: str,
    proper_only: bool = False,
    exhaustive: bool = False,
    min_size: int = 1,
    max_results: int | None = None,
    table: DistanceTable | None = None,
) -> list[Cutset]:
    """Separated cutsets via maximal independent sets of the dual graph.

    Without ``exhaustive`` the maximal separated sets that disconnect are
    returned. With it, every disconnecting separated subset of size at least
    ``min_size`` is returned. Output is sorted by member ids.
    """
    table = table or distances(g)
    dual = build_dual(g, sigma, mode, table)
    nodes = list(dual.nodes)
    k = len(nodes)
    close = dual.adjacency_masks()
    full = (1 << k) - 1
    compat = [full & ~close[i] & ~(1 << i) for i in range(k)]
    tester = _CutTester(g, mode)
    # member positions coincide with edge ids / vertex positions
    cache: dict[int, bool] = {}

    def disconnects(mask: int) -> bool:
        hit = cache.get(mask)
        if hit is None:
            hit = cache[mask] = tester.disconnects(mask)
        return hit

    found: set[int] = set()
    limit = max_results if max_results is not None else float("inf")

    def emit(mask: int) -> None:
        found.add(mask)
        if len(found) > limit:
            partial = _finish(g, mode, found, proper_only)
            raise SearchLimitError(
                f"more than {max_results} cutsets; search stopped", partial[:max_results]
            )

    for top in _maximal_separated_sets(compat, disconnects):
        if not exhaustive:
            if top.bit_count() >= min_size:
                emit(top)
            continue
        seen: set[int] = set()
        stack = [top]
        while stack:
            mask = stack.pop()
            if mask in seen:
                continue
            seen.add(mask)
            if mask.bit_count() >= min_size:
                emit(mask)
            if mask.bit_count() <= min_size:
                continue
            for b in _bits(mask):
                sub = mask & ~(1 << b)
                if sub and sub not in seen and disconnects(sub):
                    stack.append(sub)
    return _finish(g, mode, found, proper_only)


def _finish(g: MetricGraph, mode: str, masks: Iterable[int], proper_only: bool) -> list[Cutset]:
    ids = member_ids(g, mode)
    out = []
    for mask in masks:
        c = Cutset(mode, tuple(ids[i] for i in _bits(mask)), g)
        if proper_only and not is_proper(g, c):
            continue
        out.append(c)
    return sort_cutsets(out)


def sort_cutsets(cutsets: Iterable[Cutset]) -> list[Cutset]:
    return sorted(cutsets, key=lambda c: (c.kind, c.members))


def brute_force_cutsets(
    g: MetricGraph,
    sigma: int,
    mode: str,
    min_size: int = 1,
    proper_only: bool = False,
) -> list[Cutset]:
    """Reference enumeration over every subset of I(Γ)."""
    table = distances(g)
    cells = member_cells(g, mode)
    if len(cells) > 16:
        raise ValueError("brute force is limited to 16 candidate members")
    out = []
    for r in range(max(min_size, 1), len(cells) + 1):
        for combo in itertools.combinations(cells, r):
            if any(table(a, b) < 2 * sigma for a, b in itertools.combinations(combo, 2)):
                continue
            c = Cutset(mode, tuple(x.id for x in combo), g)
            part = components_minus(g, c)
            if len(part) < 2:
                continue
            if proper_only and not is_proper(g, c, part):
                continue
            out.append(c)
    return sort_cutsets(out)


def minimal_edge_subcutsets(g: MetricGraph, c: Cutset) -> list[Cutset]:
    """Minimal edge cutsets (bonds) contained in ``c``.

    The complement components of ``c`` are contracted to a quotient whose
    edges are the members of ``c``. For every quotient node ``t``, and every
    pair of adjacent nodes, each component ``B`` of the quotient with those
    nodes deleted yields the bond of edges leaving ``B``. Any two pairs of
    points that ``c`` separates are separated by one of these bonds.
    """
    if c.kind != EDGE:
        raise ValueError("edge cutsets only")
    part = components_minus(g, c)
    q_ends = {}
    for x in c.members:
        e = g.edges[x]
        q_ends[x] = (part.comp(Vertex(e.u)), part.comp(Vertex(e.v)))
    nodes = range(len(part))
    q_adj: dict[int, set[int]] = {i: set() for i in nodes}
    for a, b in q_ends.values():
        if a != b:
            q_adj[a].add(b)
            q_adj[b].add(a)
    removals = [{t} for t in nodes]
    removals += [{a, b} for a in nodes for b in q_adj[a] if a < b]
    bonds: set[tuple[int, ...]] = set()
    for removed in removals:
        rest = [i for i in nodes if i not in removed]
        seen: set[int] = set()
        for s in rest:
            if s in seen:
                continue
            block = {s}
            stack = [s]
            while stack:
                y = stack.pop()
                for z in q_adj[y]:
                    if z not in removed and z not in block:
                        block.add(z)
                        stack.append(z)
            seen |= block
            for side in (block, set(nodes) - block):
                # the complement of a block is connected only in the pair case,
                # so both shores are tried and checked below
                crossing = tuple(
                    sorted(x for x, (a, b) in q_ends.items() if (a in side) != (b in side))
                )
                if crossing:
                    bonds.add(crossing)
    out = []
    for members in bonds:
        cand = Cutset(EDGE, members, g)
        if _is_bond(g, cand):
            out.append(cand)
    return sort_cutsets(out)


def _is_bond(g: MetricGraph, c: Cutset) -> bool:
    part = components_minus(g, c)
    if len(part) != 2:
        return False
    return all(len(t) == len(c) for t in part.touches)


_EDGE_TOKEN = re.compile(r"e_\{?(\d+)\s*,\s*(\d+)(?:\s*;\s*(\d+))?\}?")
_VERTEX_TOKEN = re.compile(r"x_?\{?(\d+)\}?")


def format_cutset(g: MetricGraph, c: Cutset) -> str:
    if c.kind == VERTEX:
        return "{" + ", ".join(f"x_{{{v}}}" for v in c.members) + "}"
    parts = []
    for x in c.members:
        e = g.edges[x]
        par = g.edges_between(e.u, e.v)
        tag = "" if len(par) == 1 else f";{par.index(x)}"
        parts.append(f"e_{{{e.u},{e.v}{tag}}}")
    return "{" + ", ".join(parts) + "}"


def format_cutsets(g: MetricGraph, cutsets: Sequence[Cutset]) -> str:
    return "".join(format_cutset(g, c) + "\n" for c in cutsets)


def parse_cutset(g: MetricGraph, text: str) -> Cutset:
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ValueError(f"cutset must be braced: {text!r}")
    edges = _EDGE_TOKEN.findall(body)
    verts = _VERTEX_TOKEN.findall(body)
    if edges and verts:
        raise ValueError("mixed edge and vertex tokens")
    if edges:
        ids = []
        for a, b, k in edges:
            par = g.edges_between(int(a), int(b))
            if not par:
                raise ValueError(f"no edge between {a} and {b}")
            if len(par) > 1 and not k:
                raise ValueError(f"parallel edges between {a} and {b} need an index")
            ids.append(par[int(k) if k else 0])
        return Cutset(EDGE, tuple(ids), g)
    if verts:
        ids = [int(v) for v in verts]
        return Cutset(VERTEX, tuple(ids), g)
    raise ValueError(f"no members in {text!r}")


def parse_cutsets(g: MetricGraph, text: str) -> list[Cutset]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip().rstrip(",")
        if line:
            out.append(parse_cutset(g, line))
    return out


def cutset_to_json(c: Cutset) -> dict:
    return {"kind": c.kind, "members": list(c.members)}


def cutset_from_json(g: MetricGraph, data: dict) -> Cutset:
    return Cutset(data["kind"], tuple(data["members"]), g)
