from __future__ import annotations

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from linksep.solve import Infeasible, PositiveSolution, certifies_infeasible, integerize, positive_kernel


def residual(A, x):
    return [sum(Fraction(a) * v for a, v in zip(row, x)) for row in A]


def test_empty_system_gives_all_ones():
    assert positive_kernel([], 3).x == (1, 1, 1)


def test_forced_zero_is_infeasible():
    # edges a, b, c covered by {a, b} and {b, c}: sums n1, n1 + n2, n2;
    # the differences against b give n2 = 0 and n1 = 0
    A = [[0, 1], [1, 0]]
    res = positive_kernel(A, 2)
    assert isinstance(res, Infeasible)
    assert certifies_infeasible(A, res.z)


def test_simple_balance():
    res = positive_kernel([[1, -1, 0], [0, 2, -1]], 3)
    assert isinstance(res, PositiveSolution)
    assert res.x == (1, 1, 2)


def test_integerize_clears_denominators():
    assert integerize([Fraction(1, 2), Fraction(1, 3)]) == (3, 2)
    assert integerize([Fraction(4), Fraction(6)]) == (2, 3)


matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=1, max_size=5))


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_positive_kernel_is_sound(A):
    n = len(A[0])
    res = positive_kernel(A, n)
    if isinstance(res, PositiveSolution):
        assert all(isinstance(v, int) and v >= 1 for v in res.x)
        assert all(r == 0 for r in residual(A, res.x))
    else:
        # z^T A is nonnegative and nonzero, so no positive x has A x = 0
        assert certifies_infeasible(A, res.z)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(1, 6), min_size=2, max_size=5), matrices)
def test_planted_positive_solution_is_found(x0, B):
    # build rows orthogonal to a planted positive vector
    n = len(x0)
    rows = []
    for row in B:
        row = (row + [0] * n)[:n]
        s = sum(a * b for a, b in zip(row, x0))
        row = [a * x0[0] - (s if i == 0 else 0) for i, a in enumerate(row)]
        rows.append(row)
    assert all(r == 0 for r in residual(rows, x0))
    res = positive_kernel(rows, n)
    assert isinstance(res, PositiveSolution)
    assert all(r == 0 for r in residual(rows, res.x))
