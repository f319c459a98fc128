"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`Ring` is an ordered tuple of variable names (optionally split into
blocks).  A :class:`Poly` is a map from exponent tuples to nonzero
:class:`fractions.Fraction` coefficients.  Polynomials are treated as
immutable values: every operation returns a fresh object.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

Monomial = tuple  # tuple[int, ...]
Scalar = Union[int, Fraction]


class RingMismatchError(ValueError):
    """Operands live in different rings."""


@dataclass(frozen=True)
class Ring:
    names: tuple
    blocks: tuple = ()

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        blocks = tuple(self.blocks)
        if blocks and sum(blocks) != len(names):
            raise ValueError("block sizes must add up to the variable count")
        object.__setattr__(self, "blocks", blocks)

    @property
    def ngens(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def gens(self) -> list["Poly"]:
        return [self.var(i) for i in range(self.ngens)]

    def var(self, name_or_index) -> "Poly":
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        mono = tuple(1 if j == i else 0 for j in range(self.ngens))
        return Poly._make(self, {mono: Fraction(1)})

    def zero(self) -> "Poly":
        return Poly._make(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c: Scalar) -> "Poly":
        c = Fraction(c)
        return Poly._make(self, {(0,) * self.ngens: c} if c else {})

    def monomial(self, exps: Sequence[int], coeff: Scalar = 1) -> "Poly":
        exps = tuple(exps)
        if len(exps) != self.ngens:
            raise ValueError("exponent length does not match ring")
        return Poly(self, {exps: coeff})

    def monomials_of_degree(self, m: int) -> list:
        return list(monomials_of_degree(self.ngens, m))

    def __str__(self) -> str:
        return "QQ[" + ", ".join(self.names) + "]"


def monomials_of_degree(n: int, m: int) -> Iterator[tuple]:
    """All exponent vectors of length ``n`` and total degree ``m``, lex-descending."""
    if n == 0:
        if m == 0:
            yield ()
        return
    if n == 1:
        yield (m,)
        return
    for first in range(m, -1, -1):
        for rest in monomials_of_degree(n - 1, m - first):
            yield (first,) + rest


def mono_mul(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: tuple, a: tuple) -> tuple:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def _grevlex_key(m: tuple) -> tuple:
    return (sum(m), tuple(-e for e in reversed(m)))


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order; ``key`` maps a monomial to a sortable tuple (larger is bigger).

    kinds: ``grevlex``, ``lex``, ``block`` (grevlex on the front ``block``
    variables, ties broken by grevlex on the rest) and ``weight``
    (weight vector first, ties broken by ``tiebreak``).
    """

    kind: str = "grevlex"
    block: int = 0
    weights: tuple = ()
    tiebreak: "MonomialOrder | None" = None

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block", "weight"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "weight":
            object.__setattr__(self, "weights", tuple(Fraction(w) for w in self.weights))

    def key(self, m: tuple) -> tuple:
        if self.kind == "grevlex":
            return _grevlex_key(m)
        if self.kind == "lex":
            return m
        if self.kind == "block":
            k = self.block
            return (_grevlex_key(m[:k]), _grevlex_key(m[k:]))
        tb = self.tiebreak or GREVLEX
        return (sum(w * e for w, e in zip(self.weights, m)), tb.key(m))

    def key_function(self) -> Callable[[tuple], tuple]:
        """A memoizing ``key``; the cache is local to the returned closure."""
        cache: dict = {}
        raw = self.key

        def key(m):
            k = cache.get(m)
            if k is None:
                k = cache[m] = raw(m)
            return k

        return key


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def block_order(front: int) -> MonomialOrder:
    return MonomialOrder("block", block=front)


def weight_order(weights: Sequence[Scalar], tiebreak: MonomialOrder | None = None) -> MonomialOrder:
    return MonomialOrder("weight", weights=tuple(weights), tiebreak=tiebreak or GREVLEX)


class Poly:
    """Sparse polynomial over QQ."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: Mapping[tuple, Scalar] | None = None):
        clean = {}
        n = ring.ngens
        for mono, c in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != n or any(e < 0 for e in mono):
                raise ValueError(f"monomial {mono} does not conform to {ring}")
            c = Fraction(c)
            if c:
                clean[mono] = clean.get(mono, 0) + c
                if not clean[mono]:
                    del clean[mono]
        self.ring = ring
        self.terms = clean

    @classmethod
    def _make(cls, ring: Ring, terms: dict) -> "Poly":
        p = object.__new__(cls)
        p.ring = ring
        p.terms = terms
        return p

    # -- basic protocol -------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self.terms.items())))

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        return format_poly(self)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._make(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._make(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Poly._make(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c: Scalar) -> "Poly":
        c = Fraction(c)
        if not c:
            return self.ring.zero()
        return Poly._make(self.ring, {m: v * c for m, v in self.terms.items()})

    def mul_monomial(self, mono: tuple, c: Scalar = 1) -> "Poly":
        c = Fraction(c)
        if not c:
            return self.ring.zero()
        return Poly._make(self.ring, {mono_mul(m, mono): v * c for m, v in self.terms.items()})

    # -- structure ------------------------------------------------------

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, var) -> int:
        i = var if isinstance(var, int) else self.ring.index(var)
        return max((m[i] for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def require_homogeneous(self) -> "Poly":
        if not self.is_homogeneous():
            raise ValueError(f"polynomial is not homogeneous: {self}")
        return self

    def block_degrees(self, blocks: Sequence[Sequence[int]]) -> set:
        """Set of multidegree tuples, one entry per index block."""
        return {tuple(sum(m[i] for i in b) for b in blocks) for m in self.terms}

    def variables(self) -> set:
        return {i for m in self.terms for i, e in enumerate(m) if e}

    def constant_value(self) -> Fraction | None:
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1:
            (m, c), = self.terms.items()
            if not any(m):
                return c
        return None

    def coefficients_in(self, var) -> dict:
        """Map ``k -> coefficient of var^k`` (coefficients are Polys in the same ring)."""
        i = var if isinstance(var, int) else self.ring.index(var)
        out: dict = {}
        for m, c in self.terms.items():
            k = m[i]
            rest = m[:i] + (0,) + m[i + 1:]
            out.setdefault(k, {})[rest] = c
        return {k: Poly._make(self.ring, t) for k, t in out.items()}

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> tuple:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder = GREVLEX) -> Fraction:
        return self.terms[self.leading_monomial(order)]

    def content(self) -> Fraction:
        """Positive rational c with self/c primitive over ZZ."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self, order: MonomialOrder = LEX) -> "Poly":
        """Integer-coefficient primitive part, normalized so the leading coefficient under ``order`` is positive."""
        if not self.terms:
            return self
        p = self.scale(1 / self.content())
        if p.leading_coefficient(order) < 0:
            p = -p
        return p

    def normalized(self) -> "Poly":
        """Primitive integer coefficients with the lex-first monomial positive."""
        return self.primitive(LEX)

    # -- evaluation & substitution ----------------------------------------

    def evaluate(self, values: Sequence[Scalar]) -> Fraction:
        if len(values) != self.ring.ngens:
            raise ValueError("value count does not match ring")
        vals = [Fraction(v) for v in values]
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for v, e in zip(vals, m):
                if e:
                    t *= v ** e
            total += t
        return total

    def substitute(self, images: Sequence["Poly"], target: Ring | None = None) -> "Poly":
        """Replace variable i by ``images[i]``; images share one target ring."""
        if len(images) != self.ring.ngens:
            raise ValueError(
                f"substitution needs {self.ring.ngens} images, got {len(images)}")
        if target is None:
            target = images[0].ring if images else self.ring
        for im in images:
            if im.ring != target:
                raise RingMismatchError("substitution images must share a ring")
        powers: dict = {}

        def power(i, e):
            key = (i, e)
            if key not in powers:
                powers[key] = images[i] ** e
            return powers[key]

        out = target.zero()
        acc: dict = {}
        for m, c in self.terms.items():
            t = target.const(c)
            for i, e in enumerate(m):
                if e:
                    t = t * power(i, e)
                    if not t:
                        break
            for mm, cc in t.terms.items():
                s = acc.get(mm, 0) + cc
                if s:
                    acc[mm] = s
                else:
                    acc.pop(mm, None)
        out = Poly._make(target, acc)
        return out

    def linear_change(self, matrix: Sequence[Sequence[Scalar]]) -> "Poly":
        """Substitute ``x_i -> sum_j matrix[i][j] x_j`` within the same ring."""
        n = self.ring.ngens
        gens = self.ring.gens()
        images = []
        for i in range(n):
            row = matrix[i]
            acc = self.ring.zero()
            for j in range(n):
                if row[j]:
                    acc = acc + gens[j].scale(row[j])
            images.append(acc)
        return self.substitute(images, self.ring)

    def embed(self, target: Ring) -> "Poly":
        """Re-express in a ring containing all of this ring's variable names."""
        idx = [target.index(nm) for nm in self.ring.names]
        out = {}
        for m, c in self.terms.items():
            mm = [0] * target.ngens
            for i, e in zip(idx, m):
                mm[i] = e
            out[tuple(mm)] = c
        return Poly._make(target, out)

    def restrict(self, target: Ring) -> "Poly":
        """Inverse of :meth:`embed`; fails if a dropped variable occurs."""
        keep = {nm: self.ring.index(nm) for nm in target.names}
        dropped = [i for i, nm in enumerate(self.ring.names) if nm not in keep]
        out = {}
        for m, c in self.terms.items():
            if any(m[i] for i in dropped):
                raise ValueError(f"{self} involves variables outside {target}")
            out[tuple(m[keep[nm]] for nm in target.names)] = c
        return Poly._make(target, out)

    def sorted_terms(self, order: MonomialOrder = LEX) -> list:
        return sorted(self.terms.items(), key=lambda mc: order.key(mc[0]), reverse=True)


def format_poly(p: Poly, order: MonomialOrder = LEX) -> str:
    """Serialize in the text grammar, e.g. ``3/2*x0^2*x1 - x2^3``."""
    if not p.terms:
        return "0"
    parts = []
    for m, c in p.sorted_terms(order):
        factors = []
        for name, e in zip(p.ring.names, m):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = str(mag) + "*" + "*".join(factors)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def poly_arith(op: str, a: Poly, b) -> Poly:
    """Dispatcher for ``add``, ``mul``, ``power`` (b an int) and ``substitute`` (b a list of images)."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "power":
        return a ** b
    if op == "substitute":
        return a.substitute(list(b))
    raise ValueError(f"unknown operation {op!r}")


def product(polys: Iterable[Poly], ring: Ring) -> Poly:
    out = ring.one()
    for p in polys:
        out = out * p
    return out


def combined_ring(*rings: Ring) -> Ring:
    names = tuple(itertools.chain.from_iterable(r.names for r in rings))
    return Ring(names, tuple(r.ngens for r in rings))
