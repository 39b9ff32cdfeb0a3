from __future__ import annotations

import re
from pathlib import Path

import pytest

from linksep.corpus import PRIMARY_LIST, load, names, read_text
from linksep.graph import bipartition, parse_graph, regular_degree
from oracles import girth

PAPER = Path(__file__).resolve().parents[1] / "paper.md"
CAPTIONS = {
    "GQ": "Edge incidences for the minimal generalized quadrangle",
    "F24A": "Edge incidences for $F24A$",
    "F26A": "Edge incidences for $F26A$",
    "F40A": "Edge incidences for $F40A$",
    "F48A": "Edge incidences for $F48A$",
    "G54": "Edge incidences for $G54$",
}
SIZES = {"GQ": 30, "F24A": 24, "F26A": 26, "F40A": 40, "F48A": 48, "G54": 54}
ROW = re.compile(r"^\s*(\d+)\s*&\s*(\d+)\s*&\s*(\d+)\s*&\s*(\d+)")


def table_from_source(name: str) -> dict[int, list[int]]:
    """Adjacency rows of the incidence table with the given caption."""
    lines = PAPER.read_text().splitlines()
    end = next(i for i, line in enumerate(lines) if CAPTIONS[name] in line)
    start = max(i for i in range(end) if r"\begin{table}" in lines[i])
    rows = {}
    for line in lines[start:end + 1]:
        m = ROW.match(line)
        if m:
            v, *nbrs = map(int, m.groups())
            rows[v] = sorted(nbrs)
    return rows


pytestmark = pytest.mark.skipif(not PAPER.exists(), reason="source text not present")


@pytest.mark.parametrize("name", sorted(SIZES))
def test_embedded_graph_matches_source_table(name):
    g = load(name).graph
    table = table_from_source(name)
    assert len(table) == SIZES[name] == g.n
    assert {v: sorted(g.neighbors(v)) for v in g.vertices} == table


@pytest.mark.parametrize("name", sorted(SIZES))
def test_cubic_bipartite(name):
    g = load(name).graph
    assert regular_degree(g) == 3
    assert bipartition(g) is not None
    assert g.m == 3 * g.n // 2


def test_gq_facts():
    g = load("GQ").graph
    assert (g.n, g.m, girth(g)) == (30, 45, 8)


@pytest.mark.parametrize("name,count", [
    ("GQ", 10), ("F24A", 4), ("F26A", 1), ("F40A", 17), ("F48A", 4), ("G54", 60),
])
def test_primary_list_sizes(name, count):
    assert len(load(name).primary()) == count
    assert PRIMARY_LIST[name] in load(name).cutsets


def test_embedded_text_reparses():
    for name in SIZES:
        g = load(name).graph
        text = read_text(name.lower() + ".txt")
        h = parse_graph(text)
        assert sorted((e.u, e.v) for e in g.edges) == sorted((e.u, e.v) for e in h.edges)


@pytest.mark.parametrize("spelling", ["C_3,2", "C_{3,2}"])
def test_cage(spelling):
    d = load(spelling)
    assert d.name == "C_3,2" and (d.graph.n, d.graph.m) == (2, 3)


def test_cycle():
    d = load("C_6")
    assert (d.graph.n, d.graph.m, d.primary()) == (6, 6, [])


def test_case_insensitive_names():
    assert load("gq").name == "GQ"


@pytest.mark.parametrize("bad", ["F99A", "C_2", "", "cage"])
def test_unknown_name(bad):
    with pytest.raises(KeyError):
        load(bad)


def test_names():
    assert names()[:6] == ["GQ", "F24A", "F26A", "F40A", "F48A", "G54"]
