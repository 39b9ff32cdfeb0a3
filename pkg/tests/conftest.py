from __future__ import annotations

import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from linksep.corpus import load  # noqa: E402
from linksep.symmetry import automorphisms  # noqa: E402


@lru_cache(maxsize=None)
def dataset(name: str):
    return load(name)


@lru_cache(maxsize=None)
def aut(name: str):
    return automorphisms(dataset(name).graph)


@pytest.fixture
def gq():
    return dataset("GQ")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
