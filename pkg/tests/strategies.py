from __future__ import annotations

from hypothesis import strategies as st

from linksep.graph import MetricGraph


@st.composite
def connected_graphs(draw, min_vertices: int = 2, max_vertices: int = 8, max_edges: int = 12,
                     multi: bool = True) -> MetricGraph:
    """Connected multigraphs: a random spanning tree plus extra edges."""
    n = draw(st.integers(min_vertices, max_vertices))
    pairs = [(draw(st.integers(0, i - 1)), i) for i in range(1, n)]
    budget = max(0, max_edges - len(pairs))
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
                          .filter(lambda p: p[0] != p[1]), max_size=budget))
    for a, b in extra:
        key = (min(a, b), max(a, b))
        if multi or key not in {(min(x, y), max(x, y)) for x, y in pairs}:
            pairs.append((a, b))
    return MetricGraph.from_edges(pairs, range(n))
