"""Automorphism groups of small graphs, orbit closures of cutset collections
and the search for an edge-regular subgroup.

Permutations act on vertex positions (indices into ``g.vertices``). Groups are
materialized in full since every group met here has at most a few thousand
elements.
"""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from .cutsets import EDGE, Cutset
from .graph import MetricGraph, bipartition, distances

if TYPE_CHECKING:
    from .certify import CutsetCollection

Perm = tuple[int, ...]


class ResourceLimitError(RuntimeError):
    pass


def compose(p: Perm, q: Perm) -> Perm:
    """``p`` after ``q``."""
    return tuple(p[i] for i in q)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def closure(gens: Sequence[Perm], degree: int, limit: int | None = None) -> set[Perm]:
    ident = tuple(range(degree))
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = compose(s, x)
            if y not in seen:
                seen.add(y)
                if limit is not None and len(seen) > limit:
                    raise ResourceLimitError("group larger than limit")
                queue.append(y)
    return seen


def perm_order(p: Perm) -> int:
    ident = tuple(range(len(p)))
    k, q = 1, p
    while q != ident:
        q = compose(p, q)
        k += 1
    return k


@dataclass(frozen=True)
class PermGroup:
    graph: MetricGraph
    generators: tuple[Perm, ...]
    elements: tuple[Perm, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def degree(self) -> int:
        return self.graph.n

    def is_closed(self) -> bool:
        elems = set(self.elements)
        return all(compose(a, b) in elems for a in self.generators for b in self.elements) and all(
            inverse(a) in elems for a in self.generators
        )

    def vertex_image(self, p: Perm, v: int) -> int:
        g = self.graph
        return g.vertices[p[g.index(v)]]

    def to_json(self) -> dict:
        return {
            "vertices": list(self.graph.vertices),
            "order": self.order,
            "generators": [list(p) for p in self.generators],
        }


def _edge_lookup(g: MetricGraph) -> dict[tuple[int, int], list[int]]:
    table: dict[tuple[int, int], list[int]] = {}
    for e in g.edges:
        a, b = sorted((g.index(e.u), g.index(e.v)))
        table.setdefault((a, b), []).append(e.id)
    return table


def edge_permutation(g: MetricGraph, p: Perm, lookup=None) -> tuple[int, ...]:
    """Edge action of a vertex permutation; parallel edges keep id order."""
    lookup = lookup or _edge_lookup(g)
    out = [0] * g.m
    for (a, b), ids in lookup.items():
        key = tuple(sorted((p[a], p[b])))
        targets = lookup.get(key)
        if targets is None or len(targets) != len(ids):
            raise ValueError("permutation does not preserve adjacency")
        for src, dst in zip(ids, targets):
            out[src] = dst
    return tuple(out)


def is_automorphism(g: MetricGraph, p: Perm) -> bool:
    if sorted(p) != list(range(g.n)):
        return False
    try:
        edge_permutation(g, p)
    except ValueError:
        return False
    return True


def _bfs_order(g: MetricGraph) -> tuple[list[int], list[int]]:
    order, parent = [], []
    seen = set()
    for s in range(g.n):
        if s in seen:
            continue
        seen.add(s)
        order.append(s)
        parent.append(-1)
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.neighbors(g.vertices[x]):
                j = g.index(y)
                if j not in seen:
                    seen.add(j)
                    order.append(j)
                    parent.append(x)
                    queue.append(j)
    return order, parent


def automorphisms(g: MetricGraph, max_vertices: int = 400, max_order: int = 200_000) -> PermGroup:
    """Full automorphism group by distance-preserving backtracking."""
    if g.n > max_vertices:
        raise ResourceLimitError(f"{g.n} vertices exceeds the guard of {max_vertices}")
    n = g.n
    table = distances(g).vertex_block()
    colour = [
        (g.degree(v), tuple(sorted(Counter(table[i].tolist()).items())))
        for i, v in enumerate(g.vertices)
    ]
    order, parent = _bfs_order(g)
    nbrs = [[g.index(y) for y in g.neighbors(v)] for v in g.vertices]
    lookup = _edge_lookup(g)
    found: list[Perm] = []
    image = [-1] * n
    used = [False] * n

    def candidates(depth: int) -> Iterable[int]:
        v = order[depth]
        par = parent[depth]
        pool = range(n) if par < 0 else sorted(set(nbrs[image[par]]))
        mapped = order[:depth]
        if mapped:
            src = table[v, mapped]
            dst_rows = [image[u] for u in mapped]
        for w in pool:
            if used[w] or colour[w] != colour[v]:
                continue
            if mapped and not np.array_equal(table[w, dst_rows], src):
                continue
            yield w

    def search(depth: int) -> None:
        if depth == n:
            p = tuple(image)
            try:
                edge_permutation(g, p, lookup)
            except ValueError:
                return
            found.append(p)
            if len(found) > max_order:
                raise ResourceLimitError("automorphism group exceeds the order guard")
            return
        v = order[depth]
        for w in candidates(depth):
            image[v] = w
            used[w] = True
            search(depth + 1)
            used[w] = False
            image[v] = -1

    search(0)
    elements = tuple(sorted(found))
    return PermGroup(g, _choose_generators(elements, n), elements)


def find_isomorphism(g: MetricGraph, h: MetricGraph) -> Perm | None:
    """A vertex bijection (by position) carrying ``g`` onto ``h``, or None."""
    if (g.n, g.m) != (h.n, h.m) or g.n == 0:
        return None if (g.n, g.m) != (h.n, h.m) else ()
    tg, th = distances(g).vertex_block(), distances(h).vertex_block()

    def colours(x, t):
        return [(x.degree(v), tuple(sorted(Counter(t[i].tolist()).items()))) for i, v in enumerate(x.vertices)]

    cg, ch = colours(g, tg), colours(h, th)
    if sorted(cg) != sorted(ch):
        return None
    order, parent = _bfs_order(g)
    nbrs_h = [[h.index(y) for y in h.neighbors(v)] for v in h.vertices]
    lg, lh = _edge_lookup(g), _edge_lookup(h)
    image = [-1] * g.n
    used = [False] * h.n

    def fits() -> bool:
        for (a, b), ids in lg.items():
            key = tuple(sorted((image[a], image[b])))
            if len(lh.get(key, ())) != len(ids):
                return False
        return True

    def search(depth: int) -> bool:
        if depth == g.n:
            return fits()
        v, par = order[depth], parent[depth]
        pool = range(h.n) if par < 0 else sorted(set(nbrs_h[image[par]]))
        mapped = order[:depth]
        for w in pool:
            if used[w] or ch[w] != cg[v]:
                continue
            if mapped and not np.array_equal(th[w, [image[u] for u in mapped]], tg[v, mapped]):
                continue
            image[v], used[w] = w, True
            if search(depth + 1):
                return True
            image[v], used[w] = -1, False
        return False

    return tuple(image) if search(0) else None


def _choose_generators(elements: Sequence[Perm], degree: int) -> tuple[Perm, ...]:
    ident = tuple(range(degree))
    gens: list[Perm] = []
    span = {ident}
    for p in elements:
        if p not in span:
            gens.append(p)
            span = closure(gens, degree)
        if len(span) == len(elements):
            break
    return tuple(gens)


def group_from_generators(g: MetricGraph, gens: Sequence[Perm], limit: int | None = None) -> PermGroup:
    gens = tuple(tuple(x) for x in gens)
    for p in gens:
        if not is_automorphism(g, p):
            raise ValueError("generator is not an automorphism")
    elements = tuple(sorted(closure(gens, g.n, limit)))
    return PermGroup(g, gens, elements)


def trivial_group(g: MetricGraph) -> PermGroup:
    ident = tuple(range(g.n))
    return PermGroup(g, (), (ident,))


def vertex_orbits(grp: PermGroup) -> list[list[int]]:
    g = grp.graph
    seen: set[int] = set()
    out = []
    for i in range(g.n):
        if i in seen:
            continue
        orb = sorted({p[i] for p in grp.elements})
        seen.update(orb)
        out.append([g.vertices[j] for j in orb])
    return out


def edge_orbits(grp: PermGroup) -> list[list[int]]:
    g = grp.graph
    lookup = _edge_lookup(g)
    perms = [edge_permutation(g, p, lookup) for p in grp.elements]
    seen: set[int] = set()
    out = []
    for e in range(g.m):
        if e in seen:
            continue
        orb = sorted({q[e] for q in perms})
        seen.update(orb)
        out.append(orb)
    return out


@dataclass(frozen=True)
class Transitivity:
    vertex_transitive: bool
    edge_transitive: bool
    edge_regular_subgroup: str  # "yes", "no" or "unknown"

    def to_json(self) -> dict:
        return {
            "vertex_transitive": self.vertex_transitive,
            "edge_transitive": self.edge_transitive,
            "bipartition_preserving_edge_regular_subgroup": self.edge_regular_subgroup,
        }


def transitivity(g: MetricGraph, grp: PermGroup, search_subgroup: bool = False) -> Transitivity:
    vt = len(vertex_orbits(grp)) == 1
    et = g.m > 0 and len(edge_orbits(grp)) == 1
    flag = "unknown"
    if search_subgroup:
        res = find_edge_regular_subgroup(g, grp)
        flag = res.status
    return Transitivity(vt, et, flag)


def class_preserving(grp: PermGroup) -> list[Perm]:
    """Elements mapping each bipartition class to itself."""
    g = grp.graph
    col = bipartition(g)
    if col is None:
        raise ValueError("graph is not bipartite")
    c = [col[v] for v in g.vertices]
    return [p for p in grp.elements if all(c[p[i]] == c[i] for i in range(g.n))]


@dataclass(frozen=True)
class SubgroupResult:
    status: str  # "yes", "no" or "unknown"
    group: PermGroup | None = None


def find_edge_regular_subgroup(
    g: MetricGraph, grp: PermGroup, max_subgroups: int = 20_000
) -> SubgroupResult:
    """Search for a bipartition-preserving subgroup acting freely and
    transitively on edges, growing subgroups from cyclic ones."""
    target = g.m
    plus = class_preserving(grp)
    if len(plus) % target:
        return SubgroupResult("no")
    lookup = _edge_lookup(g)
    ident = tuple(range(g.n))
    pool = []
    for p in plus:
        if p == ident:
            continue
        q = edge_permutation(g, p, lookup)
        if any(q[e] == e for e in range(g.m)):
            continue
        if target % perm_order(p):
            continue
        pool.append(p)
    pool_set = set(pool)

    def free(elems: set[Perm]) -> bool:
        return all(x == ident or x in pool_set for x in elems)

    start = []
    seen: set[frozenset] = set()
    for p in [ident] + pool:
        s = frozenset(closure([p], g.n))
        if s not in seen and free(s):
            seen.add(s)
            start.append((s, (p,)))
    queue = deque(start)
    explored = 0
    while queue:
        elems, gens = queue.popleft()
        if len(elems) == target:
            sub = PermGroup(g, tuple(x for x in gens if x != ident), tuple(sorted(elems)))
            if len(edge_orbits(sub)) == 1:
                return SubgroupResult("yes", sub)
            continue
        for p in pool:
            if p in elems:
                continue
            try:
                bigger = frozenset(closure(list(gens) + [p], g.n, limit=target))
            except ResourceLimitError:
                continue
            if target % len(bigger) or bigger in seen or not free(bigger):
                continue
            seen.add(bigger)
            explored += 1
            if explored > max_subgroups:
                return SubgroupResult("unknown")
            queue.append((bigger, gens + (p,)))
    return SubgroupResult("no")


def image_cutset(g: MetricGraph, p: Perm, c: Cutset, lookup=None) -> Cutset:
    if c.kind == EDGE:
        q = edge_permutation(g, p, lookup)
        return Cutset(EDGE, tuple(q[x] for x in c.members), g)
    return Cutset(c.kind, tuple(g.vertices[p[g.index(v)]] for v in c.members), g)


def orbit_closure(g: MetricGraph, grp: PermGroup, collection) -> CutsetCollection:
    """The multiset union of the orbits of the seed cutsets.

    The multiplicity of an image counts every (seed, element) pair landing on
    it, weighted by the seed's own multiplicity.
    """
    from .certify import CutsetCollection

    lookup = _edge_lookup(g)
    counts: Counter = Counter()
    kind = None
    if g.m:
        eperms = [edge_permutation(g, p, lookup) for p in grp.elements]
    for c, mult in collection.entries:
        kind = c.kind
        for i, p in enumerate(grp.elements):
            if c.kind == EDGE:
                q = eperms[i]
                members = tuple(sorted(q[x] for x in c.members))
            else:
                members = tuple(sorted(g.vertices[p[g.index(v)]] for v in c.members))
            counts[members] += mult
    entries = [(Cutset(kind, m, g), k) for m, k in sorted(counts.items())]
    return CutsetCollection(tuple(entries))
