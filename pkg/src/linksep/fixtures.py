"""Small polygonal complexes used by tests, demos and the CLI."""
from __future__ import annotations

from .complexes import PolygonalComplex
from .corpus import load

# A fixed-point-free involution on the 30 vertex positions of the GQ
# incidence graph, and 15 triples of its edges (as position pairs). Each
# triple closes up into a hexagon when alternated with involution steps.
_GQ_INVOLUTION = (
    14, 12, 24, 22, 28, 26, 18, 20, 10, 15, 8, 19, 1, 25, 0,
    9, 29, 27, 6, 11, 7, 23, 3, 21, 2, 13, 5, 17, 4, 16,
)
_GQ_HEXAGONS = (
    ((2, 3), (21, 22), (23, 24)), ((1, 18), (6, 19), (11, 12)),
    ((4, 5), (17, 26), (27, 28)), ((2, 23), (7, 24), (20, 21)),
    ((7, 8), (10, 11), (19, 20)), ((0, 29), (9, 16), (14, 15)),
    ((0, 13), (5, 14), (25, 26)), ((3, 4), (21, 28), (22, 23)),
    ((4, 27), (16, 17), (28, 29)), ((8, 29), (9, 10), (15, 16)),
    ((3, 10), (8, 9), (15, 22)), ((5, 6), (17, 18), (26, 27)),
    ((6, 7), (11, 20), (18, 19)), ((1, 2), (12, 13), (24, 25)),
    ((0, 1), (12, 25), (13, 14)),
)

# Difference triples in Z/13 for the mixed triangle complex.
_MIXED_TRIPLES = (
    (1, 2, 11), (1, 3, 9), (1, 4, 5), (2, 3, 12), (2, 8, 10), (3, 6, 7),
    (4, 6, 11), (4, 10, 12), (5, 7, 12), (5, 8, 9), (6, 9, 10), (7, 8, 11),
)


def gq_link_complex() -> PolygonalComplex:
    """One vertex, 15 loops and 15 equilateral triangles; the vertex link is
    the GQ incidence graph.

    Loop ``l`` joins the link positions ``a < iota(a)``; its end 0 is ``a``.
    """
    iota = _GQ_INVOLUTION
    loops = sorted((a, b) for a, b in enumerate(iota) if a < b)
    loop_of = {}
    for lid, (a, b) in enumerate(loops):
        loop_of[a] = (lid, 1)
        loop_of[b] = (lid, -1)
    faces = []
    for hexagon in _GQ_HEXAGONS:
        corners = {frozenset(p) for p in hexagon}
        a, b = hexagon[0]
        start, darts = a, []
        while True:
            darts.append(loop_of[b])
            nxt = iota[b]
            if nxt == start:
                break
            (edge,) = [c for c in corners if nxt in c and c != frozenset((a, b))]
            a, b = nxt, next(iter(edge - {nxt}))
        if len(darts) != 3:
            raise AssertionError("hexagon does not close after three corners")
        faces.append(darts)
    return PolygonalComplex([0], [(0, 0)] * len(loops), faces)


def gq_link_positions() -> dict[tuple[int, int], int]:
    """Map from loop ends of :func:`gq_link_complex` to GQ vertex ids."""
    verts = load("GQ").graph.vertices
    loops = sorted((a, b) for a, b in enumerate(_GQ_INVOLUTION) if a < b)
    out = {}
    for lid, (a, b) in enumerate(loops):
        out[(lid, 0)] = verts[a]
        out[(lid, 1)] = verts[b]
    return out


def mixed_triangle_complex() -> PolygonalComplex:
    """Triangle complex with links F26A at twelve vertices and F24A at the
    remaining 26.

    Vertices are ``u_i`` (0..11), ``(2, a)`` (12 + a) and ``(3, a)`` (25 + a)
    for ``a`` in Z/13. Triangle ``{u_i, (2, a), (3, a + d)}`` is present for
    each ``d`` in the i-th difference triple.
    """
    tris = []
    for i, ds in enumerate(_MIXED_TRIPLES):
        for a in range(13):
            for d in ds:
                tris.append((i, 12 + a, 25 + (a + d) % 13))
    return PolygonalComplex.from_triangles(tris)


def single_polygon(k: int) -> PolygonalComplex:
    edges = [(i, (i + 1) % k) for i in range(k)]
    darts = [(i, 1) for i in range(k)]
    return PolygonalComplex(range(k), edges, [darts])


def three_squares() -> PolygonalComplex:
    """Three unit squares sharing a corner pairwise along edges; the central
    vertex has a triangle link of angular length 3 pi / 2."""
    # centre 0, spokes 1, 2, 3, outer corners 4, 5, 6
    edges = [(0, 1), (0, 2), (0, 3), (1, 4), (4, 2), (2, 5), (5, 3), (3, 6), (6, 1)]
    faces = [
        [(0, 1), (3, 1), (4, 1), (1, -1)],
        [(1, 1), (5, 1), (6, 1), (2, -1)],
        [(2, 1), (7, 1), (8, 1), (0, -1)],
    ]
    return PolygonalComplex(range(7), edges, faces)


FIXTURES = {
    "gq-link": gq_link_complex,
    "mixed": mixed_triangle_complex,
    "square": lambda: single_polygon(4),
    "triangle": lambda: single_polygon(3),
    "three-squares": three_squares,
}
