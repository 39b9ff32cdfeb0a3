"""Exact strictly positive solutions of homogeneous integer systems.

``positive_kernel(A)`` decides whether ``A x = 0`` has a solution with every
coordinate positive. It runs a two-phase simplex over ``Fraction`` with
Bland's rule on ``x = 1 + y, y >= 0`` and minimises ``sum(x)``. When no such
solution exists it returns a row combination ``w = z^T A`` with ``w >= 0`` and
``w != 0``; no positive ``x`` can satisfy ``w . x = 0``, so ``w`` certifies
infeasibility.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence


@dataclass(frozen=True)
class PositiveSolution:
    x: tuple[int, ...]


@dataclass(frozen=True)
class Infeasible:
    z: tuple[Fraction, ...]
    w: tuple[Fraction, ...]


def integerize(values: Sequence[Fraction]) -> tuple[int, ...]:
    """Clear denominators and divide out the common factor."""
    den = 1
    for v in values:
        den = lcm(den, Fraction(v).denominator)
    ints = [int(Fraction(v) * den) for v in values]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return tuple(v // g for v in ints) if g else tuple(ints)


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        piv = row[c]
        if piv != 1:
            inv = 1 / piv
            self.rows[r] = row = [v * inv for v in row]
            self.rhs[r] *= inv
        nz = [j for j, v in enumerate(row) if v]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[c]
            if f:
                for j in nz:
                    other[j] -= f * row[j]
                self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = c

    def reduced_costs(self, cost: list[Fraction]) -> list[Fraction]:
        red = list(cost)
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                for j, v in enumerate(self.rows[i]):
                    if v:
                        red[j] -= cb * v
        return red

    def minimise(self, cost: list[Fraction], allowed: int) -> None:
        """Bland's rule over columns ``< allowed``; the problem is bounded."""
        while True:
            red = self.reduced_costs(cost)
            enter = next((j for j in range(allowed) if red[j] < 0), None)
            if enter is None:
                return
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise ArithmeticError("unbounded direction in a bounded program")
            self.pivot(best[1], enter)


def positive_kernel(A: Sequence[Sequence[int | Fraction]], ncols: int | None = None):
    """Find integer ``x >= 1`` with ``A x = 0``, or a certificate that none exists."""
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    if n == 0:
        raise ValueError("no unknowns")
    if m == 0:
        return PositiveSolution(tuple([1] * n))
    Af = [[Fraction(v) for v in row] for row in A]
    sign = []
    rows, rhs = [], []
    for i, row in enumerate(Af):
        b = -sum(row)
        s = -1 if b < 0 else 1
        sign.append(s)
        rows.append([s * v for v in row] + [Fraction(int(k == i)) for k in range(m)])
        rhs.append(s * b)
    tab = _Tableau(rows, rhs, [n + i for i in range(m)])
    phase1 = [Fraction(0)] * n + [Fraction(1)] * m
    tab.minimise(phase1, n + m)
    value = sum(tab.rhs[i] for i, b in enumerate(tab.basis) if b >= n)
    if value > 0:
        red = tab.reduced_costs(phase1)
        pi = [1 - red[n + i] for i in range(m)]
        z = tuple(-sign[i] * pi[i] for i in range(m))
        w = tuple(sum(z[i] * Af[i][j] for i in range(m)) for j in range(n))
        if any(v < 0 for v in w) or not any(w):
            raise ArithmeticError("phase-one duals failed to certify infeasibility")
        return Infeasible(z, w)
    # push remaining artificials out of the basis or drop redundant rows
    keep = []
    for i in range(len(tab.rows)):
        if tab.basis[i] >= n:
            col = next((j for j in range(n) if tab.rows[i][j]), None)
            if col is None:
                continue
            tab.pivot(i, col)
        keep.append(i)
    tab = _Tableau(
        [tab.rows[i][:n] for i in keep], [tab.rhs[i] for i in keep], [tab.basis[i] for i in keep]
    )
    tab.minimise([Fraction(1)] * n, n)
    y = [Fraction(0)] * n
    for i, b in enumerate(tab.basis):
        y[b] = tab.rhs[i]
    x = integerize([1 + v for v in y])
    for row in Af:
        if sum(r * v for r, v in zip(row, x)) != 0:
            raise ArithmeticError("solution failed exact re-check")
    return PositiveSolution(x)


def certifies_infeasible(A: Sequence[Sequence[int | Fraction]], z: Sequence[Fraction]) -> bool:
    """Check that ``z^T A`` is a nonzero nonnegative vector."""
    n = len(A[0]) if A else 0
    w = [sum(Fraction(z[i]) * Fraction(A[i][j]) for i in range(len(A))) for j in range(n)]
    return all(v >= 0 for v in w) and any(w)
