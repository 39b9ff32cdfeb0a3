"""Named graphs and their cutset lists, embedded as text."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources

from .cutsets import Cutset, parse_cutsets
from .graph import MetricGraph, cage_graph, cycle_graph, parse_graph

_FILES = {
    "GQ": ("gq.txt", {"C1-C10": "gq_cutsets.txt"}),
    "F24A": ("f24a.txt", {"C1-C4": "f24a_cutsets.txt"}),
    "F26A": ("f26a.txt", {"A1": "f26a_cutsets.txt"}),
    "F40A": ("f40a.txt", {"appendix": "f40a_cutsets.txt"}),
    "F48A": ("f48a.txt", {"C1-C4": "f48a_cutsets.txt"}),
    "G54": ("g54.txt", {"appendix": "g54_cutsets.txt"}),
}

# the key under which each dataset keeps its principal list
PRIMARY_LIST = {
    "GQ": "C1-C10",
    "F24A": "C1-C4",
    "F26A": "A1",
    "F40A": "appendix",
    "F48A": "C1-C4",
    "G54": "appendix",
}


@dataclass(frozen=True)
class NamedDataset:
    name: str
    graph: MetricGraph
    cutsets: dict[str, list[Cutset]] = field(default_factory=dict)

    def primary(self) -> list[Cutset]:
        key = PRIMARY_LIST.get(self.name)
        return self.cutsets.get(key, []) if key else []


def read_text(filename: str) -> str:
    return resources.files("linksep").joinpath("data", filename).read_text()


def names() -> list[str]:
    return list(_FILES) + ["C_k,2", "C_n"]


_CAGE = re.compile(r"^C_\{?(\d+),2\}?$")
_CYCLE = re.compile(r"^C_\{?(\d+)\}?$")


def load(name: str) -> NamedDataset:
    """Load ``GQ``, ``F24A``, ``F26A``, ``F40A``, ``F48A``, ``G54``, a cage
    ``C_k,2`` or a cycle ``C_n``."""
    key = name.upper() if name.upper() in _FILES else name
    if key in _FILES:
        graph_file, lists = _FILES[key]
        g = parse_graph(read_text(graph_file))
        cuts = {label: parse_cutsets(g, read_text(fn)) for label, fn in lists.items()}
        return NamedDataset(key, g, cuts)
    m = _CAGE.match(name)
    if m:
        return NamedDataset(f"C_{m.group(1)},2", cage_graph(int(m.group(1))))
    m = _CYCLE.match(name)
    if m and int(m.group(1)) >= 3:
        return NamedDataset(f"C_{m.group(1)}", cycle_graph(int(m.group(1))))
    raise KeyError(f"unknown dataset {name!r}; known: {', '.join(names())}")
