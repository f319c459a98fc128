"""Exact linear algebra over QQ (and determinants over polynomial rings)."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .poly import Poly


def _to_integer_rows(matrix) -> list:
    rows = []
    for row in matrix:
        row = [Fraction(v) for v in row]
        den = 1
        for v in row:
            den = den * v.denominator // math.gcd(den, v.denominator)
        rows.append([int(v * den) for v in row])
    return rows


def row_echelon(matrix) -> tuple:
    """Fraction-free (Bareiss) elimination.

    Returns ``(rows, pivots)`` where ``rows`` are integer rows in echelon form
    and ``pivots`` the pivot column of each nonzero row.
    """
    a = _to_integer_rows(matrix)
    if not a:
        return [], []
    ncols = len(a[0])
    nrows = len(a)
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, nrows):
            f = a[i][c]
            row_i = a[i]
            row_r = a[r]
            # Bareiss step: the division by the previous pivot is exact.
            a[i] = [(piv * row_i[j] - f * row_r[j]) // prev for j in range(ncols)]
        prev = piv
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(matrix) -> int:
    return len(row_echelon(matrix)[1])


def rank_and_nullspace(matrix) -> tuple:
    """Exact rank and a basis of the right kernel ``{v : A v = 0}``."""
    matrix = [list(row) for row in matrix]
    if not matrix or not matrix[0]:
        ncols = len(matrix[0]) if matrix else 0
        basis = [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
        return 0, basis
    rows, pivots = row_echelon(matrix)
    ncols = len(matrix[0])
    # back-substitute to reduced form over QQ
    red = [[Fraction(v) for v in row] for row in rows]
    for k in range(len(red) - 1, -1, -1):
        c = pivots[k]
        pv = red[k][c]
        red[k] = [v / pv for v in red[k]]
        for i in range(k):
            f = red[i][c]
            if f:
                red[i] = [x - f * y for x, y in zip(red[i], red[k])]
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for k, c in enumerate(pivots):
            v[c] = -red[k][fcol]
        basis.append(v)
    return len(pivots), basis


def solve(matrix, rhs) -> list | None:
    """One exact solution of ``A x = b`` or ``None`` when inconsistent."""
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    ncols = len(matrix[0]) if matrix else 0
    rows, pivots = row_echelon(aug)
    if pivots and pivots[-1] == ncols:
        return None
    red = [[Fraction(v) for v in row] for row in rows]
    x = [Fraction(0)] * ncols
    for k in range(len(red) - 1, -1, -1):
        c = pivots[k]
        s = red[k][ncols] - sum(red[k][j] * x[j] for j in range(c + 1, ncols))
        x[c] = s / red[k][c]
    return x


def determinant(matrix) -> Fraction:
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return Fraction(1)
    a = [[Fraction(v) for v in row] for row in matrix]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def inverse(matrix) -> list:
    n = len(matrix)
    a = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(matrix)]
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            raise ValueError("matrix is singular")
        a[c], a[p] = a[p], a[c]
        pv = a[c][c]
        a[c] = [v / pv for v in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [row[n:] for row in a]


def transpose(matrix) -> list:
    return [list(col) for col in zip(*matrix)]


def matmul(a, b) -> list:
    bt = transpose(b)
    return [[sum((Fraction(x) * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a, v) -> list:
    return [sum((Fraction(x) * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def poly_determinant(matrix: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant of a square matrix of polynomials by memoized Laplace expansion.

    Cost is O(n 2^n) products, adequate for the small Sylvester and bracket
    matrices used here.  Zero entries are skipped.
    """
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    ring = matrix[0][0].ring

    @lru_cache(maxsize=None)
    def minor(row: int, cols: frozenset) -> Poly:
        # expand row ``row`` against the remaining columns ``cols``
        if row == n:
            return ring.one()
        acc = ring.zero()
        ordered = sorted(cols)
        for pos, c in enumerate(ordered):
            entry = matrix[row][c]
            if not entry:
                continue
            sub = minor(row + 1, cols - {c})
            if not sub:
                continue
            term = entry * sub
            acc = acc - term if pos % 2 else acc + term
        return acc

    return minor(0, frozenset(range(n)))


class IncrementalBasis:
    """Maintains an echelon basis of sparse vectors (dicts index -> Fraction).

    ``add`` returns True when the vector is independent of those added so far.
    """

    def __init__(self, key=None):
        self._rows: dict = {}  # pivot -> reduced row with leading entry 1
        self._key = key  # pivot choice: largest index under key

    def __len__(self) -> int:
        return len(self._rows)

    def _pivot(self, vec: dict):
        return max(vec, key=self._key) if self._key else max(vec)

    def reduce(self, vec: dict) -> dict:
        v = {k: Fraction(c) for k, c in vec.items() if c}
        while v:
            p = self._pivot(v)
            row = self._rows.get(p)
            if row is None:
                return v
            f = v[p]
            for k, c in row.items():
                s = v.get(k, 0) - f * c
                if s:
                    v[k] = s
                else:
                    v.pop(k, None)
        return v

    def add(self, vec: dict) -> bool:
        v = self.reduce(vec)
        if not v:
            return False
        p = self._pivot(v)
        inv = 1 / v[p]
        self._rows[p] = {k: c * inv for k, c in v.items()}
        return True
