"""Z_m homology covers built from voltage assignments.

The cover of a connected graph with first Betti number ``b`` has vertex set
``V x (Z_m)^b``. Tree edges of a breadth-first spanning tree lift
horizontally; the ``j``-th non-tree edge (in edge-id order) carries the
``j``-th standard basis vector as its voltage.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .certify import CutsetCollection, SeparationCertificate, check_edge_separated
from .cutsets import EDGE, Cutset
from .graph import MetricGraph, betti_number, girth, is_connected

DEFAULT_MAX_VERTICES = 200_000


class CoverError(ValueError):
    pass


@dataclass(frozen=True)
class CoverGraph:
    base: MetricGraph
    m: int
    tree_edges: tuple[int, ...]
    voltage: dict[int, int]  # non-tree edge id -> basis index
    total: MetricGraph
    vertex_proj: tuple[int, ...]  # total vertex id -> base vertex id
    edge_proj: tuple[int, ...]  # total edge id -> base edge id

    @property
    def betti(self) -> int:
        return len(self.voltage)

    @property
    def sheets(self) -> int:
        return self.m ** self.betti

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "sheets": self.sheets,
            "voltage": {str(e): j for e, j in sorted(self.voltage.items())},
            "vertex_projection": list(self.vertex_proj),
            "edge_projection": list(self.edge_proj),
        }


def bfs_spanning_tree(g: MetricGraph) -> list[int]:
    root = min(g.vertices)
    seen = {root}
    tree = []
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for eid in g.incident(x):
            y = g.edges[eid].other(x)
            if y not in seen:
                seen.add(y)
                tree.append(eid)
                queue.append(y)
    return sorted(tree)


def zm_cover(g: MetricGraph, m: int, max_vertices: int = DEFAULT_MAX_VERTICES) -> CoverGraph:
    if m < 2:
        raise ValueError("m must be at least 2")
    if not is_connected(g):
        raise CoverError("the base graph must be connected")
    tree = bfs_spanning_tree(g)
    tree_set = set(tree)
    non_tree = [e.id for e in g.edges if e.id not in tree_set]
    voltage = {e: j for j, e in enumerate(non_tree)}
    b = len(non_tree)
    if b != betti_number(g):
        raise AssertionError("spanning tree has the wrong size")
    sheets = m**b
    if g.n * sheets > max_vertices:
        raise CoverError(f"cover would have {g.n * sheets} vertices (limit {max_vertices})")
    step = [m**j for j in range(b)]

    def shift(code: int, j: int) -> int:
        digit = (code // step[j]) % m
        return code + step[j] * (((digit + 1) % m) - digit)

    pairs, vproj, eproj = [], [], []
    for i, v in enumerate(g.vertices):
        vproj.extend([v] * sheets)
    for e in g.edges:
        iu, iv = g.index(e.u), g.index(e.v)
        for code in range(sheets):
            dst = code if e.id not in voltage else shift(code, voltage[e.id])
            pairs.append((iu * sheets + code, iv * sheets + dst))
            eproj.append(e.id)
    total = MetricGraph.from_edges(pairs, vertices=range(g.n * sheets))
    cover = CoverGraph(g, m, tuple(tree), voltage, total, tuple(vproj), tuple(eproj))
    verify_covering_map(cover.base, cover.total, cover.vertex_proj, cover.edge_proj)
    return cover


def verify_covering_map(
    base: MetricGraph, total: MetricGraph, vproj: Sequence[int], eproj: Sequence[int]
) -> None:
    """Check that the projection maps each vertex star bijectively onto the
    star of its image; raise :class:`CoverError` otherwise."""
    if len(vproj) != total.n or len(eproj) != total.m:
        raise CoverError("projection tables have the wrong length")
    for i, v in enumerate(total.vertices):
        bv = vproj[i]
        images = []
        for eid in total.incident(v):
            be = base.edges[eproj[eid]]
            w = total.edges[eid].other(v)
            if bv not in (be.u, be.v) or be.other(bv) != vproj[total.index(w)]:
                raise CoverError(f"edge {eid} does not project onto an edge at {bv}")
            images.append(be.id)
        if sorted(images) != sorted(base.incident(bv)):
            raise CoverError(f"star of total vertex {v} is not mapped bijectively")


def lift_cutset(cover: CoverGraph, c: Cutset | int) -> Cutset:
    """Full preimage of a base edge cutset (or of a single base edge)."""
    members = {c} if isinstance(c, int) else set(c.members)
    if not members:
        raise ValueError("empty cutset")
    if not isinstance(c, int) and c.kind != EDGE:
        raise ValueError("only edge cutsets are lifted")
    lifted = [i for i, be in enumerate(cover.edge_proj) if be in members]
    return Cutset(EDGE, tuple(lifted), cover.total)


def verify_cover_separation(
    cover: CoverGraph,
    sigma: int,
    base_collection: CutsetCollection | None = None,
    base_weights: Sequence[int] | None = None,
) -> SeparationCertificate:
    """Certify the lifted cutsets of a cover.

    With ``base_collection`` the lifts of a separated collection on a base of
    girth at least ``sigma`` are checked, keeping the base weights. Without
    it the cover must be a Z_{2k} cover and the family of single-edge
    preimages is checked with all weights 1.
    """
    verify_covering_map(cover.base, cover.total, cover.vertex_proj, cover.edge_proj)
    if base_collection is None:
        if cover.m % 2:
            raise CoverError("single-edge preimages need an even modulus")
        lifted = [lift_cutset(cover, e.id) for e in cover.base.edges]
        weights = [1] * len(lifted)
    else:
        gb = girth(cover.base)
        if gb < sigma:
            raise CoverError(f"base girth {gb} is below sigma = {sigma}")
        lifted = [lift_cutset(cover, c) for c in base_collection.cutsets]
        weights = list(base_weights) if base_weights is not None else base_collection.multiplicities
    cc = CutsetCollection.of(lifted)
    cert = check_edge_separated(cover.total, sigma, cc, weights=weights)
    cert.facts["sheets"] = cover.sheets
    cert.facts["lifted_from"] = "edges" if base_collection is None else "cutsets"
    return cert


def sheets_over(total: MetricGraph, base: MetricGraph) -> int:
    if total.n % base.n:
        raise ValueError("vertex counts are not commensurate")
    return total.n // base.n


def iterate_cover(g: MetricGraph, m: int, times: int, max_vertices: int = DEFAULT_MAX_VERTICES) -> list[CoverGraph]:
    out = []
    cur = g
    for _ in range(times):
        cov = zm_cover(cur, m, max_vertices)
        out.append(cov)
        cur = cov.total
    return out


def n_sheeted_cage_cover(k: int, n: int) -> MetricGraph:
    """A connected n-sheeted cover of the cage C_{k,2}.

    Vertices ``a_i = i`` and ``b_i = n + i``; edge ``j`` lifts to
    ``a_i -- b_{i+j mod n}``.
    """
    pairs = [(i, n + (i + j) % n) for j in range(k) for i in range(n)]
    return MetricGraph.from_edges(pairs, vertices=range(2 * n))


@dataclass(frozen=True)
class FillingBound:
    k: int
    n: int
    exponent: int  # closed formula
    betti_exponent: int  # b1 + b1' of the two successive Z_2 covers
    constructed_exponent: int | None
    ceiling_exponent: int  # log2 of 4 * 4**(4**(k*n))

    @property
    def index(self) -> int:
        return 2**self.exponent

    @property
    def holds(self) -> bool:
        return self.exponent <= self.ceiling_exponent

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "exponent": self.exponent,
            "index": str(self.index),
            "betti_exponent": self.betti_exponent,
            "constructed_exponent": self.constructed_exponent,
            "ceiling": f"4*4^(4^{self.k * self.n})",
            "ceiling_exponent_base2": str(self.ceiling_exponent),
            "holds": self.holds,
        }


def filling_exponent(k: int, n: int) -> int:
    """2 - (2^(2-2n+kn) + 2) n + (2^(1-2n+kn) + 1) kn, exactly."""
    e = k * n - 2 * n
    if e < 0:
        raise ValueError("k must be at least 2")
    return 2 - (2 ** (2 + e) + 2) * n + (2 ** (1 + e) + 1) * k * n


def dehn_filling_bound(k: int, n: int, construct_limit: int = 50_000) -> FillingBound:
    if k < 2 or n < 1:
        raise ValueError("need k >= 2 and n >= 1")
    exp = filling_exponent(k, n)
    b1 = k * n - 2 * n + 1
    b1_second = (k * n - 2 * n) * 2**b1 + 1
    constructed = None
    base = n_sheeted_cage_cover(k, n) if n > 1 else None
    start = base if base is not None else MetricGraph.from_edges([(0, 1)] * k, [0, 1])
    if 2 * n * 2 ** (b1 + b1_second) <= construct_limit:
        covers = iterate_cover(start, 2, 2, construct_limit)
        sheets = sheets_over(covers[-1].total, start)
        constructed = sheets.bit_length() - 1
        if 2**constructed != sheets:
            raise AssertionError("sheet count is not a power of two")
    ceiling = 2 + 2 * 4 ** (k * n)
    return FillingBound(k, n, exp, b1 + b1_second, constructed, ceiling)
