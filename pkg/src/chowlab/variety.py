"""Projective varieties and cycles: Hilbert data and the level weight w(X, m).

The coordinate ring piece of degree m is modelled as the span of the
standard monomials of a graded-reverse-lex Groebner basis; the quotient
map Sym^m E -> H^0(X, O(m)) is the normal-form map.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .groebner import eliminate, groebner_basis, normal_form, saturate_irrelevant
from .linalg import inverse, transpose
from .poly import GREVLEX, Poly, Ring, mono_divides, monomials_of_degree
from .weights import WeightFunction, determinant_line_weight, integer_approximation, sym_monomial_weight

DEFAULT_HILBERT_CEILING = 40


class StabilizationError(RuntimeError):
    """Finite differences did not stabilize before the level ceiling."""

    def __init__(self, message: str, values: Sequence):
        super().__init__(f"{message}; probed values: {[str(v) for v in values]}")
        self.values = list(values)


def level_ceiling(default: int) -> int:
    env = os.environ.get("CHOWLAB_MAX_DEGREE")
    if env:
        value = int(env)
        if value < 1:
            raise ValueError("CHOWLAB_MAX_DEGREE must be positive")
        return value
    return default


def finite_differences(values: Sequence, order: int) -> list:
    vals = list(values)
    for _ in range(order):
        vals = [b - a for a, b in zip(vals, vals[1:])]
    return vals


@dataclass(frozen=True)
class HilbertRecord:
    m: int
    h: int
    w_level: Fraction | None = None
    surjective: bool = True  # False when m is below the empirical stabilization level


class ProjectiveVariety:
    """A closed subscheme of P^N given by homogeneous generators in x_0..x_N.

    ``param`` optionally holds N+1 binary forms of a common degree in a
    two-variable ring; when no ideal is given it is computed by
    implicitization.
    """

    def __init__(self, ring: Ring, ideal: Sequence[Poly] = (), param: Sequence[Poly] | None = None,
                 name: str = ""):
        self.ring = ring
        self.name = name
        gens = []
        for g in ideal:
            if g.ring != ring:
                raise ValueError("ideal generators must live in the variety's ring")
            g.require_homogeneous()
            if g:
                gens.append(g)
        self.param = tuple(param) if param is not None else None
        if self.param is not None:
            self._check_param()
            if not gens:
                gens = self._implicitize()
            else:
                self._check_param_on_ideal(gens)
        self.ideal = tuple(gens)
        self._lock = threading.Lock()
        self._nf_cache: dict = {}
        self._hilbert_cache: dict = {}

    # -- construction helpers -----------------------------------------------

    def _check_param(self) -> None:
        phi = self.param
        if len(phi) != self.ring.ngens:
            raise ValueError(f"parametrization needs {self.ring.ngens} forms, got {len(phi)}")
        pring = phi[0].ring
        if pring.ngens != 2:
            raise ValueError("parametrization must use two variables (s, t)")
        degs = {f.degree() for f in phi if f}
        if len(degs) != 1 or any(not f.is_homogeneous() for f in phi):
            raise ValueError("parametrization must consist of binary forms of one common degree")

    @property
    def param_degree(self) -> int:
        return max(f.degree() for f in self.param)

    def _implicitize(self) -> list:
        pring = self.param[0].ring
        names = tuple(pring.names) + self.ring.names
        big = Ring(names)
        gens = [big.var(x) - f.embed(big) for x, f in zip(self.ring.names, self.param)]
        elim = eliminate(gens, list(pring.names))
        return [g.embed(self.ring) if g.ring != self.ring else g for g in
                (e.restrict(self.ring) for e in elim)]

    def _check_param_on_ideal(self, gens) -> None:
        for g in gens:
            if g.substitute(list(self.param), self.param[0].ring):
                raise ValueError(f"parametrization does not satisfy generator {g}")

    # -- basic data ---------------------------------------------------------

    @property
    def N(self) -> int:
        return self.ring.ngens - 1

    def __repr__(self) -> str:
        label = self.name or ", ".join(str(g) for g in self.ideal) or "P^%d" % self.N
        return f"ProjectiveVariety({label})"

    @cached_property
    def groebner(self) -> tuple:
        return tuple(groebner_basis(self.ideal, GREVLEX)) if self.ideal else ()

    @cached_property
    def _leading(self) -> list:
        return [g.leading_monomial(GREVLEX) for g in self.groebner]

    def is_standard(self, mono: tuple) -> bool:
        return not any(mono_divides(lm, mono) for lm in self._leading)

    def standard_monomials(self, m: int) -> list:
        return [mono for mono in monomials_of_degree(self.ring.ngens, m) if self.is_standard(mono)]

    def hilbert_dimension(self, m: int) -> int:
        """dim of the degree-m piece of the coordinate ring."""
        if m < 0:
            raise ValueError("level must be nonnegative")
        with self._lock:
            if m not in self._hilbert_cache:
                self._hilbert_cache[m] = len(self.standard_monomials(m))
            return self._hilbert_cache[m]

    @cached_property
    def _dimension_and_degree(self) -> tuple:
        return self._find_hilbert_polynomial(level_ceiling(DEFAULT_HILBERT_CEILING))

    def dimension_and_degree(self) -> tuple:
        """(d, D) read off from stabilized finite differences of the Hilbert function."""
        return self._dimension_and_degree[:2]

    @property
    def dim(self) -> int:
        return self.dimension_and_degree()[0]

    @property
    def degree(self) -> int:
        return self.dimension_and_degree()[1]

    @property
    def stable_level(self) -> int:
        """First probed level from which the Hilbert function matched its polynomial."""
        return self._dimension_and_degree[2]

    def _find_hilbert_polynomial(self, ceiling: int) -> tuple:
        values = []
        for m in range(1, ceiling + 1):
            values.append(self.hilbert_dimension(m))
            for k in range(0, self.N + 1):
                diffs = finite_differences(values, k)
                need = k + 2
                if len(diffs) >= need and len(set(diffs[-need:])) == 1 and diffs[-1] != 0:
                    start = self._first_polynomial_level(values, k, diffs[-1])
                    return k, int(diffs[-1]), start
        raise StabilizationError(f"Hilbert function did not stabilize up to level {ceiling}", values)

    @staticmethod
    def _first_polynomial_level(values, k, lead) -> int:
        # walk back while the k-th differences still equal the leading value
        diffs = finite_differences(values, k)
        i = len(diffs) - 1
        while i > 0 and diffs[i - 1] == lead:
            i -= 1
        return i + 1

    # -- coordinate changes -------------------------------------------------

    def in_basis(self, basis: Sequence[Sequence]) -> "ProjectiveVariety":
        """The same variety in coordinates y = B^T x (columns of B are the new basis of E)."""
        bt = transpose([[Fraction(v) for v in row] for row in basis])
        x_of_y = inverse(bt)  # x = (B^T)^{-1} y
        gens = [g.linear_change(x_of_y) for g in self.ideal]
        param = None
        if self.param is not None:
            pring = self.param[0].ring
            param = []
            for row in bt:
                acc = pring.zero()
                for c, f in zip(row, self.param):
                    if c:
                        acc = acc + f.scale(c)
                param.append(acc)
        return ProjectiveVariety(self.ring, gens, param, name=self.name)

    def saturated(self) -> "ProjectiveVariety":
        """Replace the ideal by its saturation with respect to <x_0, ..., x_N>."""
        if not self.ideal:
            return self
        sat = saturate_irrelevant(self.ideal)
        return ProjectiveVariety(self.ring, sat, self.param, name=self.name)

    # -- sections and the level weight --------------------------------------

    def _normal_form(self, mono: tuple) -> Poly:
        cached = self._nf_cache.get(mono)
        if cached is not None:
            return cached
        if not self.groebner:
            nf = Poly._make(self.ring, {mono: Fraction(1)})
        elif sum(mono) == 0:
            nf = self.ring.one()
        else:
            k = next(i for i, e in enumerate(mono) if e)
            prev = mono[:k] + (mono[k] - 1,) + mono[k + 1:]
            shift = tuple(int(i == k) for i in range(len(mono)))
            base = self._normal_form(prev).mul_monomial(shift)
            nf = normal_form(base, self.groebner, GREVLEX)
        self._nf_cache[mono] = nf
        return nf

    def section_images(self, m: int) -> list:
        """(monomial, image vector) for every degree-m monomial."""
        with self._lock:
            return [(mono, self._normal_form(mono).terms)
                    for mono in monomials_of_degree(self.ring.ngens, m)]

    def level_record(self, w: WeightFunction, m: int) -> HilbertRecord:
        if m < 1:
            raise ValueError("level must be positive")
        if w.dim != self.ring.ngens:
            raise ValueError(f"weight function on a space of dimension {w.dim}, expected {self.ring.ngens}")
        X = self if w.is_diagonal() else self.in_basis(w.basis)
        h = X.hilbert_dimension(m)
        pairs = X.section_images(m)
        weights = [sym_monomial_weight(w.weights, mono) for mono, _ in pairs]
        value = determinant_line_weight(weights, [img for _, img in pairs], h)
        return HilbertRecord(m, h, value, surjective=m >= self.stable_level)

    def level_weight(self, w: WeightFunction, m: int) -> Fraction:
        """w(X, m): weight of the determinant line of H^0(X, O(m))."""
        return self.level_record(w, m).w_level


@dataclass
class Cycle:
    components: list = field(default_factory=list)  # list of (ProjectiveVariety, multiplicity)

    def __post_init__(self):
        if not self.components:
            raise ValueError("a cycle needs at least one component")
        Ns = {X.N for X, _ in self.components}
        if len(Ns) != 1:
            raise ValueError("cycle components must share the ambient space")
        for _, n in self.components:
            if not isinstance(n, int) or n < 1:
                raise ValueError("multiplicities must be positive integers")

    @property
    def N(self) -> int:
        return self.components[0][0].N

    def dimension_and_degree(self) -> tuple:
        dims = {X.dim for X, _ in self.components}
        if len(dims) != 1:
            raise ValueError("cycle components have mixed dimensions")
        return dims.pop(), sum(n * X.degree for X, n in self.components)


def as_cycle(obj) -> Cycle:
    return obj if isinstance(obj, Cycle) else Cycle([(obj, 1)])


def hilbert_dimension(X: ProjectiveVariety, m: int) -> int:
    return X.hilbert_dimension(m)


def dimension_and_degree(X) -> tuple:
    return X.dimension_and_degree()


def level_weight(X: ProjectiveVariety, w: WeightFunction, m: int) -> Fraction:
    return X.level_weight(w, m)


def degree_of_contact_asymptotic(X, w: WeightFunction, max_level: int | None = None) -> Fraction:
    """e_w(X) as the stabilized (d+1)-th finite difference of m -> w(X, m).

    Rational weights are scaled to integers first and the result scaled back.
    For cycles the components are combined with their multiplicities.
    """
    if isinstance(X, Cycle):
        return sum((n * degree_of_contact_asymptotic(Y, w, max_level) for Y, n in X.components),
                   Fraction(0))
    scale, wt = integer_approximation(w, 1)
    Y = X if wt.is_diagonal() else X.in_basis(wt.basis)
    diag = WeightFunction.diagonal(wt.weights)
    d = X.dim
    first_candidate = 2 * d + 3
    ceiling = max_level if max_level is not None else level_ceiling(first_candidate + 4 * (d + 2))
    values = []
    for m in range(1, ceiling + 1):
        values.append(Y.level_weight(diag, m))
        diffs = finite_differences(values, d + 1)
        need = d + 2
        if len(diffs) >= need and len(set(diffs[-need:])) == 1:
            return Fraction(diffs[-1]) / scale
    raise StabilizationError(
        f"(d+1)-th differences of w(X,m) did not stabilize up to level {ceiling}", values)
