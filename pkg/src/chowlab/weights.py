"""Weight functions on a finite-dimensional QQ-vector space and their induced weights.

A weight function is stored as an adapted basis (the columns of ``basis``)
together with descending nonnegative weights ``r``.  The weight of a vector
is the largest ``r_j`` over the nonzero coordinates of the vector in the
adapted basis; the zero vector has weight ``-inf``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import IncrementalBasis, determinant, inverse, matvec, rank_and_nullspace, row_echelon

NEG_INF = float("-inf")


class NotSurjectiveError(ValueError):
    """The given images do not span the quotient."""


def _identity(n: int) -> tuple:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class WeightFunction:
    basis: tuple  # rows of an invertible matrix; column j is the adapted vector l_j
    weights: tuple

    def __post_init__(self):
        r = tuple(Fraction(v) for v in self.weights)
        basis = tuple(tuple(Fraction(v) for v in row) for row in self.basis)
        n = len(r)
        if n < 1:
            raise ValueError("weight vector must be nonempty")
        if any(v < 0 for v in r):
            raise ValueError(f"weights must be nonnegative: {r}")
        if any(r[i] < r[i + 1] for i in range(n - 1)):
            raise ValueError(f"weights must be sorted descending: {r}")
        if len(basis) != n or any(len(row) != n for row in basis):
            raise ValueError("basis must be a square matrix matching the weight vector")
        if determinant(basis) == 0:
            raise ValueError("basis matrix is singular")
        object.__setattr__(self, "weights", r)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "_inv", tuple(tuple(row) for row in inverse(basis)))

    @classmethod
    def diagonal(cls, r: Sequence) -> "WeightFunction":
        return cls(_identity(len(r)), tuple(r))

    @classmethod
    def normalized(cls, r: Sequence, basis: Sequence[Sequence] | None = None) -> tuple:
        """Sort weights descending (stable), permuting basis columns to match.

        Returns ``(w, perm)`` where ``perm[j]`` is the input position of the
        j-th adapted vector.
        """
        r = [Fraction(v) for v in r]
        n = len(r)
        if basis is None:
            basis = _identity(n)
        perm = sorted(range(n), key=lambda j: -r[j])
        new_basis = tuple(tuple(row[perm[j]] for j in range(n)) for row in basis)
        return cls(new_basis, tuple(r[j] for j in perm)), tuple(perm)

    @property
    def dim(self) -> int:
        return len(self.weights)

    def column(self, j: int) -> list:
        return [row[j] for row in self.basis]

    def coordinates(self, x: Sequence) -> list:
        """Coordinates of ``x`` in the adapted basis."""
        if len(x) != self.dim:
            raise ValueError(f"vector of length {len(x)} in a space of dimension {self.dim}")
        return matvec(self._inv, [Fraction(v) for v in x])

    def __call__(self, x: Sequence):
        return weight_of_vector(self, x)

    def filtration(self, alpha) -> list:
        """Spanning vectors of F^alpha = {x : w(x) <= alpha}."""
        return [self.column(j) for j in range(self.dim) if self.weights[j] <= alpha]

    def is_diagonal(self) -> bool:
        return self.basis == _identity(self.dim)


def weight_of_vector(w: WeightFunction, x: Sequence):
    coords = w.coordinates(x)
    nz = [w.weights[j] for j, c in enumerate(coords) if c]
    return max(nz) if nz else NEG_INF


def _weight_of_coords(r: Sequence, coords: Sequence):
    nz = [r[j] for j, c in enumerate(coords) if c]
    return max(nz) if nz else NEG_INF


def quotient_weight(w: WeightFunction, subspace: Sequence[Sequence], x: Sequence):
    """Weight of the class of ``x`` in E/F: the minimum of w over the coset x + F.

    F is brought to echelon form with pivots on the highest-weight adapted
    coordinates (lowest indices); reducing ``x`` against it removes every
    coordinate that F can reach, and the result attains the minimum.
    """
    coords = w.coordinates(x)
    sub = [w.coordinates(v) for v in subspace]
    sub = [v for v in sub if any(v)]
    if sub:
        rows, pivots = row_echelon(sub)
        red = [[Fraction(v) for v in row] for row in rows]
        for row, p in zip(red, pivots):
            f = coords[p] / row[p]
            if f:
                coords = [a - f * b for a, b in zip(coords, row)]
        # later rows may reintroduce nothing at earlier pivots (echelon), so one pass suffices
    if not any(coords):
        raise ValueError("representative lies in the subspace (zero class)")
    return _weight_of_coords(w.weights, coords)


def dual_weight(w: WeightFunction, h: Sequence):
    """Weight of a nonzero functional h: minus the weight of the line E/ker(h)."""
    h = [Fraction(v) for v in h]
    if len(h) != w.dim:
        raise ValueError("functional has the wrong length")
    if not any(h):
        raise ValueError("the zero functional has no weight")
    _, kernel = rank_and_nullspace([h])
    k = next(i for i, v in enumerate(h) if v)
    x = [Fraction(int(i == k)) / h[k] for i in range(w.dim)]
    return -quotient_weight(w, kernel, x)


# -- induced weight contexts ---------------------------------------------------


@dataclass(frozen=True)
class Restriction:
    w: WeightFunction
    subspace: tuple  # spanning vectors of F in standard coordinates


@dataclass(frozen=True)
class Quotient:
    w: WeightFunction
    subspace: tuple


@dataclass(frozen=True)
class Dual:
    w: WeightFunction


@dataclass(frozen=True)
class DirectSum:
    w1: WeightFunction
    w2: WeightFunction


@dataclass(frozen=True)
class Tensor:
    w1: WeightFunction
    w2: WeightFunction


@dataclass(frozen=True)
class Sym:
    w: WeightFunction
    m: int


@dataclass(frozen=True)
class Wedge:
    w: WeightFunction
    m: int


def _nonzero(x) -> bool:
    return any(Fraction(v) for v in x)


def induced_weight(ctx, element):
    """Weight of ``element`` under the weight function induced by ``ctx``.

    - Restriction: element = coordinates w.r.t. the subspace spanning set.
    - Quotient: element = representative vector in E.
    - Dual: element = coefficient vector of the functional.
    - DirectSum: element = pair (e1, e2); weight is the max.
    - Tensor: element = pair (e1, e2), a pure tensor (see :func:`tensor_matrix_weight`).
    - Sym: element = exponent tuple in adapted coordinates, or a map of such tuples to coefficients.
    - Wedge: element = list of m vectors; weight of their exterior product.
    """
    if isinstance(ctx, Restriction):
        if len(element) != len(ctx.subspace):
            raise ValueError("coordinate count does not match the subspace spanning set")
        vec = [sum((Fraction(c) * Fraction(v[i]) for c, v in zip(element, ctx.subspace)), Fraction(0))
               for i in range(ctx.w.dim)]
        if not any(vec):
            raise ValueError("zero element")
        return weight_of_vector(ctx.w, vec)
    if isinstance(ctx, Quotient):
        return quotient_weight(ctx.w, ctx.subspace, element)
    if isinstance(ctx, Dual):
        return dual_weight(ctx.w, element)
    if isinstance(ctx, DirectSum):
        e1, e2 = element
        if not _nonzero(e1) and not _nonzero(e2):
            raise ValueError("zero element")
        return max(weight_of_vector(ctx.w1, e1), weight_of_vector(ctx.w2, e2))
    if isinstance(ctx, Tensor):
        return _tensor_weight(ctx, element)
    if isinstance(ctx, Sym):
        return _sym_weight(ctx, element)
    if isinstance(ctx, Wedge):
        return _wedge_weight(ctx, element)
    raise TypeError(f"unknown induced-weight context {type(ctx).__name__}")


def _tensor_weight(ctx: Tensor, element):
    e1, e2 = element
    if len(e1) != ctx.w1.dim or len(e2) != ctx.w2.dim:
        raise ValueError("tensor factors have the wrong dimensions")
    if not _nonzero(e1) or not _nonzero(e2):
        raise ValueError("zero element")
    return weight_of_vector(ctx.w1, e1) + weight_of_vector(ctx.w2, e2)


def tensor_matrix_weight(ctx: Tensor, matrix):
    """Weight of a general tensor sum_ij M_ij e_i (x) e_j given in standard coordinates."""
    w1, w2 = ctx.w1, ctx.w2
    matrix = [[Fraction(v) for v in row] for row in matrix]
    if len(matrix) != w1.dim or any(len(row) != w2.dim for row in matrix):
        raise ValueError("tensor matrix has the wrong shape")
    # adapted coordinates: C = B1^{-1} M B2^{-T}
    inv1, inv2 = w1._inv, w2._inv
    left = [[sum((inv1[i][k] * matrix[k][j] for k in range(w1.dim)), Fraction(0))
             for j in range(w2.dim)] for i in range(w1.dim)]
    best = NEG_INF
    for i in range(w1.dim):
        for j in range(w2.dim):
            if sum((left[i][k] * inv2[j][k] for k in range(w2.dim)), Fraction(0)):
                best = max(best, w1.weights[i] + w2.weights[j])
    if best == NEG_INF:
        raise ValueError("zero element")
    return best


def sym_monomial_weight(r: Sequence, exponents: Sequence[int]) -> Fraction:
    return sum((Fraction(e) * Fraction(ri) for e, ri in zip(exponents, r)), Fraction(0))


def _sym_weight(ctx: Sym, element):
    r = ctx.w.weights
    if isinstance(element, dict):
        monos = [m for m, c in element.items() if c]
    elif hasattr(element, "terms"):
        monos = list(element.terms)
    else:
        monos = [tuple(element)]
    if not monos:
        raise ValueError("zero element")
    for m in monos:
        if len(m) != ctx.w.dim or sum(m) != ctx.m:
            raise ValueError(f"{m} is not a degree-{ctx.m} monomial in {ctx.w.dim} variables")
    return max(sym_monomial_weight(r, m) for m in monos)


def _wedge_weight(ctx: Wedge, vectors):
    if len(vectors) != ctx.m:
        raise ValueError(f"expected {ctx.m} vectors")
    coords = [ctx.w.coordinates(v) for v in vectors]
    best = NEG_INF
    for cols in itertools.combinations(range(ctx.w.dim), ctx.m):
        minor = determinant([[row[c] for c in cols] for row in coords])
        if minor:
            best = max(best, sum(ctx.w.weights[c] for c in cols))
    if best == NEG_INF:
        raise ValueError("zero element (dependent vectors)")
    return best


def determinant_line_weight(weights: Sequence, images: Sequence[dict], quotient_dim: int | None = None) -> Fraction:
    """Weight of the determinant line of a quotient of a space with a weighted basis.

    ``weights[k]`` is the weight of the k-th basis vector and ``images[k]``
    its image in the quotient (a sparse dict vector).  Basis vectors are
    scanned in ascending weight (ties by position) and kept when their image
    is independent of those already kept; the kept weights are summed.
    """
    order = sorted(range(len(weights)), key=lambda k: (weights[k], k))
    span = IncrementalBasis()
    total = Fraction(0)
    for k in order:
        if quotient_dim is not None and len(span) == quotient_dim:
            break
        if span.add(images[k]):
            total += Fraction(weights[k])
    if quotient_dim is not None and len(span) < quotient_dim:
        raise NotSurjectiveError(f"images span dimension {len(span)} < {quotient_dim}")
    return total


def integer_approximation(w: WeightFunction, eps) -> tuple:
    """Return ``(m, w_tilde)`` with integer weights on the same filtration and
    m*w <= w_tilde <= m*(1+eps)*w; m clears all weight denominators."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    m = 1
    for r in w.weights:
        m = m * r.denominator // math.gcd(m, r.denominator)
    return m, WeightFunction(w.basis, tuple(m * r for r in w.weights))
