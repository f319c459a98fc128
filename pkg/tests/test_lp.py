from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from chowlab.hull import convex_combination, extreme_points, separating_weights
from chowlab.lp import LPSizeError, linprog_exact


def test_simple_optimum():
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6
    res = linprog_exact([1, 1], A_ub=[[1, 2], [3, 1]], b_ub=[4, 6], maximize=True)
    assert res.status == "optimal"
    assert res.x == [Fraction(8, 5), Fraction(6, 5)]
    assert res.value == Fraction(14, 5)


def test_infeasible_and_unbounded():
    assert linprog_exact([1], A_eq=[[1]], b_eq=[-1]).status == "infeasible"
    assert linprog_exact([1, 0], A_ub=[[-1, 1]], b_ub=[1], maximize=True).status == "unbounded"


def test_degenerate_redundant_equalities():
    res = linprog_exact([1, 1], A_eq=[[1, 1], [2, 2]], b_eq=[1, 2])
    assert res.status == "optimal" and sum(res.x) == 1


def test_size_ceiling():
    with pytest.raises(LPSizeError):
        linprog_exact([1] * 5, A_ub=[[1] * 5] * 5, b_ub=[1] * 5, max_size=10)


small = st.integers(-4, 4)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.lists(small, min_size=n, max_size=n),
    st.lists(st.lists(small, min_size=n, max_size=n), min_size=1, max_size=4),
    st.lists(st.integers(0, 6), min_size=4, max_size=4))))
def test_against_scipy(data):
    c, A, b = data
    b = b[:len(A)]
    # box the feasible region so scipy and the exact solver see bounded problems
    n = len(c)
    A_box = A + [[int(i == j) for j in range(n)] for i in range(n)]
    b_box = b + [5] * n
    exact = linprog_exact(c, A_ub=A_box, b_ub=b_box)
    ref = linprog(c, A_ub=A_box, b_ub=b_box, bounds=[(0, None)] * n, method="highs")
    assert exact.status == "optimal" and ref.status == 0
    assert abs(float(exact.value) - ref.fun) < 1e-7
    assert all(sum(Fraction(a) * x for a, x in zip(row, exact.x)) <= bi for row, bi in zip(A_box, b_box))
    assert all(x >= 0 for x in exact.x)


def _monotone_chain(points):
    pts = sorted(set(points))
    if len(pts) <= 2:
        return set(pts)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return set(lower[:-1] + upper[:-1])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), min_size=1, max_size=9))
def test_extreme_points_match_monotone_chain(points):
    assert set(extreme_points(points)) == _monotone_chain(points)


def test_convex_combination_and_separation():
    pts = [(2, 0, 0), (0, 2, 0), (0, 0, 2)]
    lam = convex_combination(pts, (Fraction(2, 3),) * 3)
    assert lam == [Fraction(1, 3)] * 3
    assert convex_combination([(0, 1, 1)], (Fraction(2, 3),) * 3) is None
    r, t = separating_weights([(0, 1, 1)], (Fraction(2, 3),) * 3)
    assert t > 0
    assert sum((a - Fraction(2, 3)) * ri for a, ri in zip((0, 1, 1), r)) >= t
