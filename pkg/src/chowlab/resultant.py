"""Sylvester resultants of univariate polynomials and of binary forms."""

from __future__ import annotations

from typing import Sequence

from .linalg import poly_determinant
from .poly import Poly


def sylvester_matrix(p_coeffs: Sequence[Poly], q_coeffs: Sequence[Poly]) -> list:
    """Sylvester matrix from coefficient lists ordered from the top degree down.

    ``p_coeffs`` has length m+1 and ``q_coeffs`` length n+1; the matrix is
    (m+n) x (m+n) with n shifted rows of p followed by m shifted rows of q.
    """
    m = len(p_coeffs) - 1
    n = len(q_coeffs) - 1
    if m < 1 and n < 1:
        raise ValueError("resultant needs positive degree")
    ring = (p_coeffs[0] if p_coeffs else q_coeffs[0]).ring
    size = m + n
    rows = []
    for i in range(n):
        rows.append([ring.zero()] * i + list(p_coeffs) + [ring.zero()] * (size - m - 1 - i))
    for i in range(m):
        rows.append([ring.zero()] * i + list(q_coeffs) + [ring.zero()] * (size - n - 1 - i))
    return rows


def sylvester_resultant(p: Poly, q: Poly, var) -> Poly:
    """Res_var(p, q): determinant of the Sylvester matrix w.r.t. ``var``.

    With m = deg_var p and n = deg_var q this satisfies
    Res(p1*p2, q) = Res(p1, q) * Res(p2, q) and Res(q, p) = (-1)^(mn) Res(p, q).
    """
    if not p or not q:
        raise ValueError("resultant of the zero polynomial")
    if p.ring != q.ring:
        raise ValueError("operands must share a ring")
    i = var if isinstance(var, int) else p.ring.index(var)
    m, n = p.degree_in(i), q.degree_in(i)
    if m < 1 or n < 1:
        raise ValueError("both polynomials need positive degree in the variable")
    pc = p.coefficients_in(i)
    qc = q.coefficients_in(i)
    zero = p.ring.zero()
    p_list = [pc.get(k, zero) for k in range(m, -1, -1)]
    q_list = [qc.get(k, zero) for k in range(n, -1, -1)]
    return poly_determinant(sylvester_matrix(p_list, q_list))


def binary_form_coefficients(f: Poly, s, t, degree: int) -> list:
    """Coefficients of s^degree, s^(degree-1) t, ..., t^degree (each a Poly free of s, t)."""
    si = s if isinstance(s, int) else f.ring.index(s)
    ti = t if isinstance(t, int) else f.ring.index(t)
    buckets: dict = {}
    for mono, c in f.terms.items():
        a, b = mono[si], mono[ti]
        if a + b != degree:
            raise ValueError(f"{f} is not a binary form of degree {degree} in ({f.ring.names[si]}, {f.ring.names[ti]})")
        rest = list(mono)
        rest[si] = rest[ti] = 0
        buckets.setdefault(a, {})[tuple(rest)] = c
    zero = f.ring.zero()
    return [Poly(f.ring, buckets[a]) if a in buckets else zero for a in range(degree, -1, -1)]


def binary_resultant(f: Poly, g: Poly, s, t, degree: int) -> Poly:
    """Resultant of two binary forms of the same formal degree via the 2D x 2D Sylvester matrix."""
    fc = binary_form_coefficients(f, s, t, degree)
    gc = binary_form_coefficients(g, s, t, degree)
    return poly_determinant(sylvester_matrix(fc, gc))
