"""Independent reference implementations used to cross-check the package.

These deliberately avoid the package's own distance tables and union-find
code: everything here is plain breadth-first search on explicit subdivisions.
"""
from __future__ import annotations

import itertools
from collections import deque

from linksep.graph import MetricGraph


def subdivision_adjacency(g: MetricGraph) -> dict[tuple[str, int], list[tuple[str, int]]]:
    adj: dict[tuple[str, int], list[tuple[str, int]]] = {("v", v): [] for v in g.vertices}
    for e in g.edges:
        m = ("m", e.id)
        adj[m] = [("v", e.u), ("v", e.v)]
        adj[("v", e.u)].append(m)
        if e.v != e.u:
            adj[("v", e.v)].append(m)
    return adj


def bfs(adj, src) -> dict:
    dist = {src: 0}
    q = deque([src])
    while q:
        x = q.popleft()
        for y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def doubled_distances(g: MetricGraph) -> dict:
    """Half-edge counts between all cells, keyed by (("v"|"m", id), ...)."""
    adj = subdivision_adjacency(g)
    return {s: bfs(adj, s) for s in adj}


def girth(g: MetricGraph) -> float:
    """Shortest cycle by deleting each edge and measuring the detour."""
    best = float("inf")
    for e in g.edges:
        if e.u == e.v:
            return 1
        adj = {v: [] for v in g.vertices}
        for f in g.edges:
            if f.id != e.id:
                adj[f.u].append(f.v)
                adj[f.v].append(f.u)
        d = bfs(adj, e.u)
        if e.v in d:
            best = min(best, d[e.v] + 1)
    return best


def diameter(g: MetricGraph) -> int:
    adj = {v: list(g.neighbors(v)) for v in g.vertices}
    return max(max(bfs(adj, v).values()) for v in g.vertices)


def complement_components(g: MetricGraph, kind: str, members) -> list[set]:
    """Components of the topological complement, on the subdivision.

    Removing an edge removes its midpoint; removing a vertex removes it.
    Surviving midpoints stand for open edges.
    """
    adj = subdivision_adjacency(g)
    dead = {("m" if kind == "edge" else "v", x) for x in members}
    alive = [c for c in adj if c not in dead]
    seen, comps = set(), []
    for s in alive:
        if s in seen:
            continue
        comp, stack = {s}, [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in dead and y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def all_separated_cutsets(g: MetricGraph, sigma: int, kind: str) -> list[tuple[int, ...]]:
    """Every sigma-separated disconnecting subset, by exhausting all subsets."""
    dist = doubled_distances(g)
    tag = "m" if kind == "edge" else "v"
    ids = [e.id for e in g.edges] if kind == "edge" else list(g.vertices)
    out = []
    for r in range(1, len(ids) + 1):
        for combo in itertools.combinations(ids, r):
            if any(dist[(tag, a)].get((tag, b), 10**9) < 2 * sigma for a, b in itertools.combinations(combo, 2)):
                continue
            if len(complement_components(g, kind, combo)) >= 2:
                out.append(tuple(sorted(combo)))
    return sorted(out)
