"""Chow forms, Chow polytopes, bracket expansions and the degree of contact.

The Chow form of a d-dimensional X in P^N lives in d+1 blocks of dual
variables ``h{p}_{i}`` (p = 0..d, i = 0..N) and is multihomogeneous of
degree deg(X) in every block.  Two independent constructions are offered:
elimination from the incidence ideal and, for curves, the resultant of the
pulled-back hyperplanes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Sequence

from .groebner import eliminate
from .hull import extreme_points
from .linalg import poly_determinant, solve
from .poly import Poly, Ring, combined_ring
from .resultant import binary_resultant
from .variety import Cycle, ProjectiveVariety

DEFAULT_MAX_VARIABLES = 48
DEFAULT_MAX_DEGREE = 12


class ResourceLimitError(RuntimeError):
    """A configured size ceiling was exceeded."""


class ChowFormError(RuntimeError):
    """The construction did not produce a form of the expected multidegree."""


def chow_ring(N: int, d: int) -> Ring:
    names = tuple(f"h{p}_{i}" for p in range(d + 1) for i in range(N + 1))
    return Ring(names, tuple([N + 1] * (d + 1)))


def _blocks(N: int, d: int) -> list:
    return [list(range(p * (N + 1), (p + 1) * (N + 1))) for p in range(d + 1)]


@dataclass(frozen=True)
class ChowForm:
    N: int
    d: int
    D: int
    poly: Poly

    def __post_init__(self):
        ring = chow_ring(self.N, self.d)
        if self.poly.ring != ring:
            raise ValueError("Chow form must live in the block ring h0_0..hd_N")
        if not self.poly:
            raise ValueError("Chow form is zero")
        degs = self.poly.block_degrees(_blocks(self.N, self.d))
        if degs != {tuple([self.D] * (self.d + 1))}:
            raise ValueError(f"multidegree {sorted(degs)} differs from {(self.D,) * (self.d + 1)}")
        object.__setattr__(self, "poly", self.poly.normalized())

    @property
    def ring(self) -> Ring:
        return self.poly.ring

    def column_degrees(self) -> list:
        """Column multidegree (sum over blocks of the exponent of h_{., k}) for every monomial."""
        n = self.N + 1
        out = []
        for m in self.poly.terms:
            a = [0] * n
            for idx, e in enumerate(m):
                a[idx % n] += e
            out.append(tuple(a))
        return out

    def in_basis(self, basis: Sequence[Sequence]) -> "ChowForm":
        """The Chow form in the coordinates whose basis of E is given by the columns of ``basis``.

        A hyperplane h' in the new coordinates is h = B h' in the old ones,
        so F'(h'_0, .., h'_d) = F(B h'_0, .., B h'_d).
        """
        n = self.N + 1
        ring = self.ring
        gens = ring.gens()
        images = []
        for p in range(self.d + 1):
            for i in range(n):
                acc = ring.zero()
                for j in range(n):
                    c = Fraction(basis[i][j])
                    if c:
                        acc = acc + gens[p * n + j].scale(c)
                images.append(acc)
        return ChowForm(self.N, self.d, self.D, self.poly.substitute(images, ring))

    def evaluate(self, hyperplanes: Sequence[Sequence]) -> Fraction:
        values = [Fraction(v) for h in hyperplanes for v in h]
        return self.poly.evaluate(values)

    def __str__(self) -> str:
        return str(self.poly)


def _equal_up_to_scalar(f: Poly, g: Poly) -> bool:
    return f.normalized() == g.normalized()


def same_form(a: ChowForm, b: ChowForm) -> bool:
    """Equality up to sign and content."""
    return (a.N, a.d, a.D) == (b.N, b.d, b.D) and _equal_up_to_scalar(a.poly, b.poly)


def chow_form_elimination(X: ProjectiveVariety, max_variables: int = DEFAULT_MAX_VARIABLES,
                          max_degree: int = DEFAULT_MAX_DEGREE) -> ChowForm:
    """Chow form by eliminating x from I(X) + <h_p . x : p = 0..d>.

    The excess component supported on x = 0 is removed by working on an
    affine chart l = 1 (l a coordinate, then the sum of coordinates): for
    an ideal homogeneous in x, eliminating x from I + <l - 1> gives the
    x-elimination ideal of the saturation by l.  The first chart producing
    a principal elimination ideal of multidegree (D, .., D) is used.
    """
    d, D = X.dimension_and_degree()
    N = X.N
    hring = chow_ring(N, d)
    if X.ring.ngens + hring.ngens > max_variables:
        raise ResourceLimitError(f"{X.ring.ngens + hring.ngens} variables exceed the ceiling {max_variables}")
    if D > max_degree:
        raise ResourceLimitError(f"degree {D} exceeds the ceiling {max_degree}")
    big = combined_ring(X.ring, hring)
    xs = [big.var(nm) for nm in X.ring.names]
    hs = big.gens()[N + 1:]
    linear = [sum((hs[p * (N + 1) + i] * xs[i] for i in range(N + 1)), big.zero()) for p in range(d + 1)]
    ideal = [g.embed(big) for g in X.ideal]
    target = tuple([D] * (d + 1))
    charts = [xs[i] for i in range(N, -1, -1)] + [sum(xs, big.zero())]
    for chart in charts:
        gens = ideal + linear + [chart - big.one()]
        elim = eliminate(gens, list(X.ring.names))
        if len(elim) != 1:
            continue
        F = elim[0].restrict(hring)
        if F.block_degrees(_blocks(N, d)) != {target}:
            continue
        return ChowForm(N, d, D, F)
    raise ChowFormError("elimination produced no principal multidegree-(D,..,D) form "
                        "(is the ideal saturated and prime?)")


def chow_form_from_parametrization(X: ProjectiveVariety) -> ChowForm:
    """Chow form of a parametrized curve: Res_(s,t)(h_0 . phi, h_1 . phi)."""
    if X.param is None:
        raise ChowFormError("variety has no parametrization")
    phi = X.param
    pring = phi[0].ring
    Dphi = X.param_degree
    N = X.N
    d = 1
    if X.ideal:
        dX, DX = X.dimension_and_degree()
        if dX != 1:
            raise ChowFormError(f"parametrization route needs a curve, got dimension {dX}")
    hring = chow_ring(N, d)
    big = combined_ring(pring, hring)
    phis = [f.embed(big) for f in phi]
    hs = big.gens()[2:]
    pulls = [sum((hs[p * (N + 1) + i] * phis[i] for i in range(N + 1)), big.zero()) for p in range(2)]
    res = binary_resultant(pulls[0], pulls[1], 0, 1, Dphi)
    if not res:
        raise ChowFormError("parametrization has a common factor (resultant vanishes)")
    F = res.restrict(hring)
    if X.ideal and X.degree != Dphi:
        raise ChowFormError(f"parametrization degree {Dphi} differs from deg X = {X.degree} "
                            "(map is not birational onto its image)")
    return ChowForm(N, d, Dphi, F)


def chow_form(X, route: str = "auto") -> ChowForm:
    """Chow form of a variety or cycle; ``route`` is elimination, parametrization or auto."""
    if isinstance(X, Cycle):
        return cycle_chow_form(X, route)
    if route == "parametrization" or (route == "auto" and X.param is not None):
        return chow_form_from_parametrization(X)
    return chow_form_elimination(X)


def cycle_chow_form(Z: Cycle, route: str = "auto") -> ChowForm:
    forms = [(chow_form(X, route), n) for X, n in Z.components]
    dims = {F.d for F, _ in forms}
    if len(dims) != 1:
        raise ValueError("cycle components have mixed dimensions")
    N, d = Z.N, dims.pop()
    ring = chow_ring(N, d)
    poly = reduce(lambda acc, fn: acc * (fn[0].poly ** fn[1]), forms, ring.one())
    return ChowForm(N, d, sum(F.D * n for F, n in forms), poly)


# -- polytope ------------------------------------------------------------------


@dataclass(frozen=True)
class ChowPolytope:
    points: tuple
    vertices: tuple
    D: int
    d: int

    @property
    def N(self) -> int:
        return len(self.points[0]) - 1

    def barycenter(self) -> tuple:
        n = self.N + 1
        return tuple(Fraction(self.D * (self.d + 1), n) for _ in range(n))

    def permuted(self, perm: Sequence[int]) -> "ChowPolytope":
        """Coordinates reordered so that new coordinate j is old coordinate ``perm[j]``."""
        pts = tuple(sorted(tuple(p[k] for k in perm) for p in self.points))
        verts = tuple(sorted(tuple(p[k] for k in perm) for p in self.vertices))
        return ChowPolytope(pts, verts, self.D, self.d)


def chow_polytope(F: ChowForm, max_size: int | None = None) -> ChowPolytope:
    pts = sorted(set(F.column_degrees()))
    total = F.D * (F.d + 1)
    for a in pts:
        if sum(a) != total:
            raise AssertionError(f"column multidegree {a} does not sum to {total}")
    verts = extreme_points(pts, max_size)
    return ChowPolytope(tuple(pts), tuple(verts), F.D, F.d)


# -- brackets ------------------------------------------------------------------


def brackets(N: int, d: int) -> list:
    """All index sets I of size d+1 in {0..N}, ascending (T = binomial(N+1, d+1))."""
    return list(itertools.combinations(range(N + 1), d + 1))


def bracket_poly(index: Sequence[int], N: int, d: int) -> Poly:
    """[I] = det(h_{p, I_q})_{p,q}."""
    ring = chow_ring(N, d)
    gens = ring.gens()
    matrix = [[gens[p * (N + 1) + i] for i in index] for p in range(d + 1)]
    return poly_determinant(matrix)


def standard_bracket_monomials(N: int, d: int, D: int) -> list:
    """Exponent vectors j over the brackets whose bracket sequence is a standard tableau.

    A product [I_1]..[I_D] with I_1 <= .. <= I_D entrywise is standard;
    these are linearly independent and span the degree-D bracket polynomials.
    """
    bs = brackets(N, d)
    out = []
    for seq in itertools.combinations_with_replacement(range(len(bs)), D):
        ok = all(all(a <= b for a, b in zip(bs[seq[k]], bs[seq[k + 1]])) for k in range(D - 1))
        if ok:
            j = [0] * len(bs)
            for s in seq:
                j[s] += 1
            out.append(tuple(j))
    return out


@dataclass(frozen=True)
class BracketExpansion:
    N: int
    d: int
    D: int
    terms: dict = field(hash=False)  # exponent vector j over brackets -> nonzero Fraction

    @property
    def brackets(self) -> list:
        return brackets(self.N, self.d)

    def term_weight(self, j: Sequence[int], r: Sequence) -> Fraction:
        return sum((ji * sum((Fraction(r[k]) for k in I), Fraction(0))
                    for ji, I in zip(j, self.brackets)), Fraction(0))

    def content(self, j: Sequence[int]) -> tuple:
        a = [0] * (self.N + 1)
        for ji, I in zip(j, self.brackets):
            for k in I:
                a[k] += ji
        return tuple(a)

    def expand(self) -> Poly:
        ring = chow_ring(self.N, self.d)
        cache: dict = {}
        total = ring.zero()
        for j, c in self.terms.items():
            total = total + _bracket_monomial_poly(j, self.N, self.d, cache).scale(c)
        return total

    def __str__(self) -> str:
        parts = []
        for j, c in sorted(self.terms.items(), reverse=True):
            factors = []
            for ji, I in zip(j, self.brackets):
                if ji:
                    label = "[" + "".join(str(k) for k in I) + "]" if self.N < 10 else \
                        "[" + ",".join(str(k) for k in I) + "]"
                    factors.append(label + (f"^{ji}" if ji > 1 else ""))
            parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)


def _bracket_monomial_poly(j: Sequence[int], N: int, d: int, cache: dict) -> Poly:
    key = tuple(j)
    if key in cache:
        return cache[key]
    ring = chow_ring(N, d)
    bs = brackets(N, d)
    out = ring.one()
    for ji, I in zip(j, bs):
        if ji:
            if ("b", I) not in cache:
                cache[("b", I)] = bracket_poly(I, N, d)
            out = out * cache[("b", I)] ** ji
    cache[key] = out
    return out


class BracketExpansionError(ValueError):
    """The form is not a polynomial in the brackets."""


def bracket_expansion(F: ChowForm) -> BracketExpansion:
    """Express F in standard bracket monomials by an exact linear solve per content class."""
    N, d, D = F.N, F.d, F.D
    bs = brackets(N, d)
    cache: dict = {}
    by_content: dict = {}
    for j in standard_bracket_monomials(N, d, D):
        a = [0] * (N + 1)
        for ji, I in zip(j, bs):
            for k in I:
                a[k] += ji
        by_content.setdefault(tuple(a), []).append(j)
    n = N + 1
    f_by_content: dict = {}
    for m, c in F.poly.terms.items():
        a = [0] * n
        for idx, e in enumerate(m):
            a[idx % n] += e
        f_by_content.setdefault(tuple(a), {})[m] = c
    terms = {}
    for content, fpart in sorted(f_by_content.items()):
        cols = by_content.get(content)
        if not cols:
            raise BracketExpansionError(f"monomials of column degree {content} are not bracket monomials")
        polys = [_bracket_monomial_poly(j, N, d, cache) for j in cols]
        rows = sorted(set(fpart).union(*(p.terms for p in polys)))
        A = [[p.terms.get(m, Fraction(0)) for p in polys] for m in rows]
        b = [fpart.get(m, Fraction(0)) for m in rows]
        x = solve(A, b)
        if x is None:
            raise BracketExpansionError("form is not a polynomial in the brackets")
        for j, c in zip(cols, x):
            if c:
                terms[j] = c
    expansion = BracketExpansion(N, d, D, terms)
    if expansion.expand() != F.poly:
        raise BracketExpansionError("re-expansion does not reproduce the form")
    return expansion


# -- degree of contact -----------------------------------------------------------


def degree_of_contact(obj, r: Sequence, route: str = "polytope") -> Fraction:
    """e_w for diagonal weights ``r`` from a ChowForm, ChowPolytope or BracketExpansion.

    polytope: min over vertices of <a, r>; brackets: min over expansion terms
    of sum_i j_i sum_{k in I_i} r_k.
    """
    r = [Fraction(v) for v in r]
    if isinstance(obj, BracketExpansion) or (isinstance(obj, ChowForm) and route == "brackets"):
        exp = obj if isinstance(obj, BracketExpansion) else bracket_expansion(obj)
        if len(r) != exp.N + 1:
            raise ValueError("weight vector length does not match N+1")
        return min(exp.term_weight(j, r) for j in exp.terms)
    if route not in ("polytope", "brackets"):
        raise ValueError(f"unknown route {route!r}")
    poly = obj if isinstance(obj, ChowPolytope) else chow_polytope(obj)
    if len(r) != poly.N + 1:
        raise ValueError("weight vector length does not match N+1")
    return min(sum((Fraction(a) * w for a, w in zip(v, r)), Fraction(0)) for v in poly.vertices)


def contact_for_weight_function(F: ChowForm, w, route: str = "polytope") -> Fraction:
    """e_w for a general weight function: rewrite F in the adapted basis of w first."""
    G = F if w.is_diagonal() else F.in_basis(w.basis)
    return degree_of_contact(G, w.weights, route)
