"""Exact two-phase simplex over QQ with Bland's anti-cycling rule.

Problems are ``min/max c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``
and ``x >= 0``.  Dense tableau; intended for the small polytopes that
appear in Chow computations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence


class LPSizeError(RuntimeError):
    """The problem exceeds the configured size ceiling."""


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: list = field(default_factory=list)
    value: Fraction | None = None
    pivots: int = 0


class _Tableau:
    def __init__(self, rows, rhs, basis):
        self.rows = rows  # list of lists of Fraction
        self.rhs = rhs
        self.basis = basis
        self.pivots = 0

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        pv = row[c]
        if pv != 1:
            inv = 1 / pv
            row = self.rows[r] = [v * inv for v in row]
            self.rhs[r] *= inv
        for i, other in enumerate(self.rows):
            if i != r:
                f = other[c]
                if f:
                    self.rows[i] = [a - f * b for a, b in zip(other, row)]
                    self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = c
        self.pivots += 1

    def reduced_costs(self, cost: Sequence[Fraction]) -> list:
        red = list(cost)
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.rows[i]
                red = [rc - cb * a for rc, a in zip(red, row)]
        return red

    def run(self, cost: Sequence[Fraction], allowed: Sequence[bool]) -> str:
        """Minimize ``cost`` over the current basis; Bland's rule for both choices."""
        while True:
            red = self.reduced_costs(cost)
            enter = next((j for j, rc in enumerate(red) if rc < 0 and allowed[j]), None)
            if enter is None:
                return "optimal"
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    cand = (ratio, self.basis[i], i)
                    if best is None or cand < best:
                        best = cand
            if best is None:
                return "unbounded"
            self.pivot(best[2], enter)


def linprog_exact(c: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
                  A_eq: Sequence[Sequence] = (), b_eq: Sequence = (), maximize: bool = False,
                  max_size: int | None = None) -> LPResult:
    n = len(c)
    A_ub = [[Fraction(v) for v in row] for row in A_ub]
    A_eq = [[Fraction(v) for v in row] for row in A_eq]
    b_ub = [Fraction(v) for v in b_ub]
    b_eq = [Fraction(v) for v in b_eq]
    if len(A_ub) != len(b_ub) or len(A_eq) != len(b_eq):
        raise ValueError("constraint matrix and right-hand side lengths differ")
    for row in A_ub + A_eq:
        if len(row) != n:
            raise ValueError("constraint row length does not match objective")
    m_ub, m_eq = len(A_ub), len(A_eq)
    m = m_ub + m_eq
    if max_size is not None and m * (n + m_ub + m) > max_size:
        raise LPSizeError(f"LP with {m} rows and {n} columns exceeds the size ceiling {max_size}")
    cost = [Fraction(v) for v in c]
    if maximize:
        cost = [-v for v in cost]

    # columns: n structural, m_ub slacks, then artificials as needed
    rows, rhs, basis = [], [], []
    art_rows = []
    for i in range(m):
        if i < m_ub:
            row = A_ub[i] + [Fraction(int(k == i)) for k in range(m_ub)]
            b = b_ub[i]
        else:
            row = A_eq[i - m_ub] + [Fraction(0)] * m_ub
            b = b_eq[i - m_ub]
        if b < 0:
            row = [-v for v in row]
            b = -b
        rows.append(row)
        rhs.append(b)
        if i < m_ub and row[n + i] == 1:
            basis.append(n + i)
        else:
            basis.append(None)
            art_rows.append(i)
    n_struct = n + m_ub
    n_art = len(art_rows)
    for i, row in enumerate(rows):
        row.extend(Fraction(0) for _ in range(n_art))
    for k, i in enumerate(art_rows):
        rows[i][n_struct + k] = Fraction(1)
        basis[i] = n_struct + k
    total = n_struct + n_art
    tab = _Tableau(rows, rhs, basis)

    if n_art:
        phase1 = [Fraction(0)] * n_struct + [Fraction(1)] * n_art
        tab.run(phase1, [True] * total)
        if sum(tab.rhs[i] for i, b in enumerate(tab.basis) if b >= n_struct) > 0:
            return LPResult("infeasible", pivots=tab.pivots)
        # drive zero-level artificials out of the basis; drop redundant rows
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] >= n_struct:
                col = next((j for j in range(n_struct) if tab.rows[i][j]), None)
                if col is None:
                    del tab.rows[i], tab.rhs[i], tab.basis[i]
                    continue
                tab.pivot(i, col)
            i += 1

    full_cost = cost + [Fraction(0)] * (total - n)
    allowed = [True] * n_struct + [False] * n_art
    status = tab.run(full_cost, allowed)
    if status == "unbounded":
        return LPResult("unbounded", pivots=tab.pivots)
    x = [Fraction(0)] * total
    for i, b in enumerate(tab.basis):
        x[b] = tab.rhs[i]
    x = x[:n]
    value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult("optimal", x=x, value=Fraction(value), pivots=tab.pivots)
