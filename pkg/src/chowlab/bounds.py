"""Closed-form upper bounds for the degree of contact.

Every evaluator is positively homogeneous of degree one in the weights,
which is what the height inequalities require of a contact bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .groebner import is_unit_ideal, saturate_irrelevant


def _rationals(r: Sequence) -> list:
    return [Fraction(v) for v in r]


def _require_descending(r: Sequence[Fraction]) -> None:
    if any(v < 0 for v in r):
        raise ValueError(f"weights must be nonnegative: {[str(v) for v in r]}")
    if any(r[i] < r[i + 1] for i in range(len(r) - 1)):
        raise ValueError(f"weights must be sorted descending: {[str(v) for v in r]}")


@dataclass(frozen=True)
class SurfaceProjectionData:
    """Degree drops e_i and e_ij of the projections attached to a filtration."""
    N: int
    e: tuple
    e_pair: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        e = tuple(Fraction(v) for v in self.e)
        if len(e) != self.N + 1:
            raise ValueError(f"need {self.N + 1} values e_0..e_N, got {len(e)}")
        if any(v < 0 for v in e):
            raise ValueError("e_i must be nonnegative")
        pairs = {}
        for (i, j), v in self.e_pair.items():
            i, j = int(i), int(j)
            if i > j:
                i, j = j, i
            pairs[(i, j)] = Fraction(v)
            if i == j and pairs[(i, j)] != e[i]:
                raise ValueError(f"e_{i}{i} must equal e_{i}")
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "e_pair", pairs)

    def pair(self, i: int, j: int) -> Fraction:
        key = (min(i, j), max(i, j))
        if key in self.e_pair:
            return self.e_pair[key]
        if i == j:
            return self.e[i]
        raise KeyError(f"missing e_{{{i},{j}}}")


@dataclass(frozen=True)
class JSequence:
    indices: tuple

    def __post_init__(self):
        idx = tuple(int(v) for v in self.indices)
        if len(idx) < 2 or idx[0] != 0:
            raise ValueError("a J-sequence starts at 0 and has at least two entries")
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise ValueError("a J-sequence must be strictly increasing")
        object.__setattr__(self, "indices", idx)

    @property
    def N(self) -> int:
        return self.indices[-1]


def e_linear_independence(D: int, d: int, r: Sequence) -> Fraction:
    """D * (r_{N-d} + .. + r_N), the contact when the last d+1 coordinates have no common zero on X."""
    r = _rationals(r)
    if d < 0 or d >= len(r):
        raise ValueError(f"need 0 <= d < N+1, got d={d}, N+1={len(r)}")
    return D * sum(r[len(r) - d - 1:], Fraction(0))


def s_j_bound(r: Sequence, J: JSequence | Sequence[int], data: SurfaceProjectionData) -> Fraction:
    """S_J = sum_k (r_{j_k} - r_{j_{k+1}}) (e_{j_k} + e_{j_k j_{k+1}} + e_{j_{k+1}})."""
    r = _rationals(r)
    _require_descending(r)
    J = J if isinstance(J, JSequence) else JSequence(tuple(J))
    if J.N != len(r) - 1 or data.N != len(r) - 1:
        raise ValueError("J-sequence, e-data and weights disagree on N")
    total = Fraction(0)
    for a, b in zip(J.indices, J.indices[1:]):
        try:
            mid = data.pair(a, b)
        except KeyError as exc:
            raise ValueError(f"missing e-data: {exc.args[0]}") from None
        total += (r[a] - r[b]) * (data.e[a] + mid + data.e[b])
    return total


def k3_contact_bound(N: int, r: Sequence) -> Fraction:
    """min{-4 r_0 + 6 sum r, 2(N-1) r_0} for weights with r_N = 0."""
    r = _rationals(r)
    if N < 2:
        raise ValueError("need N >= 2")
    if len(r) != N + 1:
        raise ValueError(f"need {N + 1} weights, got {len(r)}")
    _require_descending(r)
    if r[N] != 0:
        raise ValueError("the K3 bound is normalized to r_N = 0")
    return min(-4 * r[0] + 6 * sum(r, Fraction(0)), 2 * (N - 1) * r[0])


def last_coordinates_avoid(X, count: int) -> bool:
    """True if x_{N-count+1} = .. = x_N = 0 has no point on X.

    Checked exactly: the ideal plus those coordinates, saturated by the
    irrelevant ideal, is the unit ideal.
    """
    gens = list(X.ideal) + [X.ring.gens()[i] for i in range(X.N + 1 - count, X.N + 1)]
    return is_unit_ideal(saturate_irrelevant(gens))
