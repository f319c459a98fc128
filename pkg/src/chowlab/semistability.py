"""Chow-semistability tests with exact certificates.

Over diagonal weight functions the inequality e_w/((d+1)D) <= sum(r)/(N+1)
holds for every r and every coordinate order exactly when the barycenter
b = D(d+1)/(N+1) * (1, .., 1) lies in the convex hull of the Chow polytope
points; otherwise an LP separating vector is a destabilizing weight.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .bounds import k3_contact_bound
from .chow import ChowForm, ChowPolytope, chow_form, chow_form_elimination, chow_polytope
from .hull import convex_combination, separating_weights
from .linalg import determinant, matmul
from .variety import Cycle, ProjectiveVariety
from .weights import WeightFunction

SEMISTABLE_DIAGONAL = "SEMISTABLE_DIAGONAL"
UNSTABLE = "UNSTABLE"

SCOPE_NOTE = "positive verdict scoped to the tested bases; not a proof of full semistability"


@dataclass(frozen=True)
class Witness:
    """Convex-combination witness: sum_k coefficients[k] * points[k] == target."""
    points: tuple
    coefficients: tuple
    target: tuple

    def verify(self) -> bool:
        if any(c < 0 for c in self.coefficients) or sum(self.coefficients) != 1:
            return False
        n = len(self.target)
        combo = [sum((c * p[i] for c, p in zip(self.coefficients, self.points)), Fraction(0))
                 for i in range(n)]
        return tuple(combo) == tuple(self.target)


@dataclass(frozen=True)
class Destabilizer:
    weight: WeightFunction
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class StabilityVerdict:
    status: str
    certificate: object
    scope: tuple = field(default_factory=tuple)  # bases tested (matrices, rows)

    @property
    def unstable(self) -> bool:
        return self.status == UNSTABLE


def _identity(n: int) -> tuple:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def _permutation_of(basis) -> tuple | None:
    """``perm`` with column j of ``basis`` equal to e_{perm[j]}, or None."""
    n = len(basis)
    perm = []
    for j in range(n):
        col = [basis[i][j] for i in range(n)]
        ones = [i for i, v in enumerate(col) if v == 1]
        if len(ones) != 1 or any(v for i, v in enumerate(col) if i != ones[0]):
            return None
        perm.append(ones[0])
    return tuple(perm) if sorted(perm) == list(range(n)) else None


def _polytope_in(data, w: WeightFunction) -> ChowPolytope:
    if isinstance(data, (ProjectiveVariety, Cycle)):
        data = chow_form(data)
    if isinstance(data, ChowForm):
        if data.N + 1 != w.dim:
            raise ValueError(f"weight function on dimension {w.dim}, form has N+1 = {data.N + 1}")
        return chow_polytope(data if w.is_diagonal() else data.in_basis(w.basis))
    if isinstance(data, ChowPolytope):
        if data.N + 1 != w.dim:
            raise ValueError(f"weight function on dimension {w.dim}, polytope has N+1 = {data.N + 1}")
        if w.is_diagonal():
            return data
        perm = _permutation_of(w.basis)
        if perm is None:
            raise ValueError("a bare polytope only supports permutation bases; pass the Chow form")
        return data.permuted(perm)
    raise TypeError(f"cannot test {type(data).__name__}")


def check_weight(data, w: WeightFunction) -> tuple:
    """(lhs, rhs, ok) with lhs = e_w/((d+1)D) and rhs = sum(r)/(N+1)."""
    poly = _polytope_in(data, w)
    r = w.weights
    e = min(sum((Fraction(a) * ri for a, ri in zip(v, r)), Fraction(0)) for v in poly.vertices)
    lhs = e / ((poly.d + 1) * poly.D)
    rhs = sum(r, Fraction(0)) / len(r)
    return lhs, rhs, lhs <= rhs


def _primitive_integer(r: Sequence[Fraction]) -> list:
    m = 1
    for v in r:
        m = m * v.denominator // math.gcd(m, v.denominator)
    ints = [int(v * m) for v in r]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return [Fraction(v // g) for v in ints] if g else [Fraction(0)] * len(r)


def semistability_test(polytope: ChowPolytope, max_size: int | None = None,
                       basis: Sequence[Sequence] | None = None) -> StabilityVerdict:
    """Membership of the barycenter in the polytope's hull, with a certificate either way.

    ``basis`` (the coordinates the polytope was computed in) is folded into
    the destabilizing weight function so the certificate refers to the
    original space.
    """
    if not polytope.points:
        raise ValueError("empty polytope")
    n = polytope.N + 1
    base = _identity(n) if basis is None else tuple(tuple(Fraction(v) for v in row) for row in basis)
    b = polytope.barycenter()
    pts = list(polytope.vertices)
    lam = convex_combination(pts, b, max_size)
    if lam is not None:
        used = [(p, c) for p, c in zip(pts, lam) if c]
        witness = Witness(tuple(p for p, _ in used), tuple(c for _, c in used), b)
        return StabilityVerdict(SEMISTABLE_DIAGONAL, witness, (base,))
    r, t = separating_weights(pts, b, max_size)
    if t <= 0:
        raise AssertionError("barycenter outside the hull but no separating weight found")
    low = min(r)
    r = _primitive_integer([v - low for v in r])
    w_local, perm = WeightFunction.normalized(r)
    adapted = matmul([list(row) for row in base], [list(row) for row in w_local.basis])
    w = WeightFunction(tuple(tuple(row) for row in adapted), w_local.weights)
    lhs, rhs, ok = check_weight(polytope, w_local)
    if ok:
        raise AssertionError("separating weight does not violate the inequality")
    return StabilityVerdict(UNSTABLE, Destabilizer(w, lhs, rhs), (base,))


def random_bases(n: int, k: int, seed: int, bound: int = 3) -> list:
    """k invertible integer matrices with entries in [-bound, bound], reproducible from ``seed``."""
    rng = random.Random(seed)
    out = []
    while len(out) < k:
        M = [[Fraction(rng.randint(-bound, bound)) for _ in range(n)] for _ in range(n)]
        if determinant(M) != 0:
            out.append(tuple(tuple(row) for row in M))
    return out


def test_under_bases(X, bases: Sequence | None = None, k: int | None = None, seed: int = 0,
                     route: str = "substitution", form: ChowForm | None = None) -> list:
    """One verdict per basis, in input order.

    route "substitution" rewrites the Chow form (F'(h) = F(B h)); route
    "elimination" recomputes it from the transformed ideal.  ``form`` may
    supply an already computed Chow form of X.
    """
    F = form if form is not None else chow_form(X)
    n = F.N + 1
    todo = [tuple(tuple(Fraction(v) for v in row) for row in B) for B in (bases or [])]
    if k:
        todo.extend(random_bases(n, k, seed))
    if not todo:
        todo = [_identity(n)]
    verdicts = []
    for B in todo:
        if len(B) != n or any(len(row) != n for row in B):
            raise ValueError("basis matrix has the wrong shape")
        if determinant(B) == 0:
            raise ValueError("basis matrix is singular")
        if route == "elimination":
            if not isinstance(X, ProjectiveVariety):
                raise ValueError("elimination route needs a single variety")
            G = chow_form_elimination(X.in_basis(B))
        elif route == "substitution":
            G = F.in_basis(B)
        else:
            raise ValueError(f"unknown route {route!r}")
        verdicts.append(semistability_test(chow_polytope(G), basis=B))
    return verdicts


# pytest would otherwise try to collect the public name above
test_under_bases.__test__ = False


def k3_semistability_arithmetic(N: int, r: Sequence) -> tuple:
    """(bound, rhs, ok) with bound = min{-4 r_0 + 6 sum r, 2(N-1) r_0} / (6(N-1))."""
    bound = k3_contact_bound(N, r) / (6 * (N - 1))
    rhs = sum((Fraction(v) for v in r), Fraction(0)) / (N + 1)
    return bound, rhs, bound <= rhs
