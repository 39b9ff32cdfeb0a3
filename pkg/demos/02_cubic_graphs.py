"""Vertex cutsets in the cubic graphs F24A, F48A and F26A."""
from __future__ import annotations

from linksep.certify import (
    CutsetCollection,
    check_dagger_separated,
    check_star_seed,
    check_star_separated,
    check_vertex_separated,
    far_set,
)
from linksep.corpus import load
from linksep.cutsets import VERTEX, enumerate_separated_cutsets
from linksep.graph import diameter
from linksep.symmetry import automorphisms, orbit_closure

for name in ("F24A", "F48A"):
    d = load(name)
    found = enumerate_separated_cutsets(d.graph, 3, VERTEX, exhaustive=True)
    cert = check_dagger_separated(d.graph, CutsetCollection.of(d.primary()))
    print(f"{name}: {len(found)} separated vertex cutsets, dagger check {cert.verdict}")
    # the pair clauses of full vertex separation are reported as facts
    print(f"  far vertex pairs left unsplit: {cert.facts['unseparated_far_vertex_pairs']}")

# F48A: two vertices at distance 3 inside the same cutset
d = load("F48A")
full = check_vertex_separated(d.graph, 3, CutsetCollection.of(d.primary()))
print("F48A full vertex separation:", full.verdict,
      full.clause("far_vertex_pairs_separated").counterexample)

# F26A has no proper separated vertex cutset; the star regime takes over
f26 = load("F26A")
g = f26.graph
proper = enumerate_separated_cutsets(g, 3, VERTEX, proper_only=True, exhaustive=True)
print(f"\nF26A: {len(proper)} proper separated vertex cutsets, diameter {diameter(g)}")
print("far set of x3:", far_set(g, 3))

grp = automorphisms(g)
seed = check_star_seed(g, 0, f26.primary(), group=grp)
print(f"seed check with A1: {seed.verdict}, edge-regular subgroup {seed.facts['edge_regular_subgroup']}")

oc = orbit_closure(g, grp, CutsetCollection.of(f26.primary()))
star = check_star_separated(g, oc)
print(f"orbit closure: {len(oc)} cutsets, star check {star.verdict}, M = {star.N}")
