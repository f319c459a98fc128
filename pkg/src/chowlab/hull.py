"""Convex-hull queries on integer point sets, answered by exact LP."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .lp import linprog_exact


def convex_combination(points: Sequence[Sequence], target: Sequence, max_size: int | None = None):
    """Weights ``lam >= 0`` with ``sum lam = 1`` and ``sum lam_k p_k = target``, or None."""
    points = [tuple(p) for p in points]
    if not points:
        return None
    dim = len(target)
    A_eq = [[Fraction(p[i]) for p in points] for i in range(dim)]
    A_eq.append([Fraction(1)] * len(points))
    b_eq = [Fraction(v) for v in target] + [Fraction(1)]
    res = linprog_exact([0] * len(points), A_eq=A_eq, b_eq=b_eq, max_size=max_size)
    if res.status != "optimal":
        return None
    return res.x


def extreme_points(points: Sequence[Sequence], max_size: int | None = None) -> list:
    """Vertices of the convex hull: points that are not convex combinations of the others."""
    pts = sorted(set(tuple(p) for p in points))
    if len(pts) <= 1:
        return pts
    out = []
    for k, p in enumerate(pts):
        others = pts[:k] + pts[k + 1:]
        if convex_combination(others, p, max_size) is None:
            out.append(p)
    return out


def separating_weights(points: Sequence[Sequence], target: Sequence, max_size: int | None = None):
    """Find ``r`` in [0,1]^n maximizing ``t`` with ``<p - target, r> >= t`` for all points.

    Returns ``(r, t)``; ``t > 0`` certifies that ``target`` lies outside the
    hull whenever the points and target share the same coordinate sum.
    """
    pts = [tuple(Fraction(v) for v in p) for p in points]
    tgt = [Fraction(v) for v in target]
    n = len(tgt)
    # variables: r_0..r_{n-1}, t  (all >= 0)
    A_ub, b_ub = [], []
    for p in pts:
        A_ub.append([-(pi - ti) for pi, ti in zip(p, tgt)] + [Fraction(1)])
        b_ub.append(Fraction(0))
    for i in range(n):
        A_ub.append([Fraction(int(j == i)) for j in range(n)] + [Fraction(0)])
        b_ub.append(Fraction(1))
    c = [Fraction(0)] * n + [Fraction(1)]
    res = linprog_exact(c, A_ub=A_ub, b_ub=b_ub, maximize=True, max_size=max_size)
    return res.x[:n], res.x[n]
