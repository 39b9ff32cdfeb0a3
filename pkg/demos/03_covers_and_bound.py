"""Homology covers of the theta graph and the index bound for fillings."""
from __future__ import annotations

from linksep.corpus import load
from linksep.covers import dehn_filling_bound, iterate_cover, verify_cover_separation, zm_cover
from linksep.graph import girth

theta = load("C_3,2").graph
first, second = iterate_cover(theta, 2, 2)
for level, cov in enumerate((first, second), start=1):
    t = cov.total
    print(f"level {level}: {cov.sheets} sheets over the previous graph, "
          f"{t.n} vertices, {t.m} edges, girth {girth(t)}")

cert = verify_cover_separation(second, 3)
print(f"single-edge preimages at sigma 3: {cert.verdict}, disjoint {cert.facts['disjoint']}, "
      f"weights {set(cert.weights)}")

# Z_4 does not quadruple the girth of the theta graph: the walk
# e0 e1^-1 e2 e0^-1 e1 e2^-1 has zero homology and length 6
print("girth of Z_4(theta):", girth(zm_cover(theta, 4).total))

for k, n in [(2, 1), (3, 1), (3, 2), (4, 1)]:
    fb = dehn_filling_bound(k, n)
    built = "not built" if fb.constructed_exponent is None else f"built 2^{fb.constructed_exponent}"
    print(f"(k, n) = ({k}, {n}): index 2^{fb.exponent} ({built}), "
          f"within 4*4^(4^{k * n}): {fb.holds}")
