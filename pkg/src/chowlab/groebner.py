"""Buchberger's algorithm with elimination, saturation and ideal intersection.

Internally polynomials are dicts ``monomial -> int`` kept primitive; the
reduction steps are fraction-free.  Pair selection follows the normal
strategy (smallest lcm first) and pairs are pruned with the Gebauer-Moller
criteria.  Everything is deterministic: ties are broken by insertion index.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .poly import (GREVLEX, MonomialOrder, Poly, Ring, block_order, mono_div, mono_divides,
                   mono_lcm, mono_mul)


def _primitive_int(terms: dict, key) -> dict:
    """Scale rational or integer terms to primitive integers with positive leading coefficient."""
    den = 1
    for c in terms.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // math.gcd(den, c.denominator)
    ints = {m: int(c * den) for m, c in terms.items()}
    g = 0
    for c in ints.values():
        g = math.gcd(g, c)
        if g == 1:
            break
    if ints[max(ints, key=key)] < 0:
        g = -g
    if g not in (1,):
        ints = {m: c // g for m, c in ints.items()}
    return ints


def _content_divide(f: dict, rem: dict) -> None:
    g = 0
    for c in f.values():
        g = math.gcd(g, c)
        if g == 1:
            return
    for c in rem.values():
        g = math.gcd(g, c)
        if g == 1:
            return
    if g > 1:
        for d in (f, rem):
            for m in d:
                d[m] //= g


class _Elem:
    __slots__ = ("lm", "lc", "terms")

    def __init__(self, terms: dict, key):
        self.terms = terms
        self.lm = max(terms, key=key)
        self.lc = terms[self.lm]


def _reduce(f: dict, reducers: Sequence[_Elem], key, full: bool = True) -> dict:
    f = dict(f)
    rem: dict = {}
    steps = 0
    while f:
        m = max(f, key=key)
        c = f[m]
        for g in reducers:
            if mono_divides(g.lm, m):
                q = mono_div(m, g.lm)
                d = math.gcd(c, g.lc)
                a = g.lc // d
                b = c // d
                if a < 0:
                    a, b = -a, -b
                if a != 1:
                    for k in f:
                        f[k] *= a
                    for k in rem:
                        rem[k] *= a
                for gm, gc in g.terms.items():
                    mm = mono_mul(gm, q)
                    s = f.get(mm, 0) - b * gc
                    if s:
                        f[mm] = s
                    else:
                        f.pop(mm, None)
                steps += 1
                if steps % 8 == 0:
                    _content_divide(f, rem)
                break
        else:
            rem[m] = c
            del f[m]
            if not full:
                rem.update(f)
                break
    return rem


def _spoly(f: _Elem, g: _Elem) -> dict:
    lcm = mono_lcm(f.lm, g.lm)
    qf = mono_div(lcm, f.lm)
    qg = mono_div(lcm, g.lm)
    d = math.gcd(f.lc, g.lc)
    af = g.lc // d
    ag = f.lc // d
    out: dict = {}
    for m, c in f.terms.items():
        mm = mono_mul(m, qf)
        out[mm] = out.get(mm, 0) + af * c
    for m, c in g.terms.items():
        mm = mono_mul(m, qg)
        s = out.get(mm, 0) - ag * c
        if s:
            out[mm] = s
        else:
            out.pop(mm, None)
    return {m: c for m, c in out.items() if c}


def _coprime(a: tuple, b: tuple) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def _buchberger(polys: list, key) -> list:
    elems: list = []
    G: list = []  # indices into elems currently in the basis
    B: list = []  # pairs (i, j)

    def update(h: int) -> None:
        nonlocal G, B
        hl = elems[h].lm
        C = list(G)
        D = []
        while C:
            g1 = C.pop(0)
            l1 = mono_lcm(hl, elems[g1].lm)
            if _coprime(hl, elems[g1].lm):
                D.append(g1)
                continue
            dominated = any(mono_divides(mono_lcm(hl, elems[g2].lm), l1) for g2 in C) or \
                any(mono_divides(mono_lcm(hl, elems[g2].lm), l1) for g2 in D)
            if not dominated:
                D.append(g1)
        E = [(g, h) for g in D if not _coprime(hl, elems[g].lm)]
        newB = []
        for (g1, g2) in B:
            l12 = mono_lcm(elems[g1].lm, elems[g2].lm)
            if (mono_divides(hl, l12)
                    and mono_lcm(elems[g1].lm, hl) != l12
                    and mono_lcm(hl, elems[g2].lm) != l12):
                continue
            newB.append((g1, g2))
        B = newB + E
        G = [g for g in G if not mono_divides(hl, elems[g].lm)] + [h]

    for p in polys:
        r = _reduce(p, [elems[g] for g in G], key)
        if not r:
            continue
        elems.append(_Elem(_primitive_int(r, key), key))
        if not any(elems[-1].lm):
            return [{elems[-1].lm: 1}]
        update(len(elems) - 1)

    while B:
        best = min(range(len(B)), key=lambda k: (
            sum(mono_lcm(elems[B[k][0]].lm, elems[B[k][1]].lm)),
            key(mono_lcm(elems[B[k][0]].lm, elems[B[k][1]].lm)), B[k]))
        i, j = B.pop(best)
        s = _spoly(elems[i], elems[j])
        if not s:
            continue
        r = _reduce(s, [elems[g] for g in G], key)
        if not r:
            continue
        elems.append(_Elem(_primitive_int(r, key), key))
        if not any(elems[-1].lm):
            # a nonzero constant: unit ideal
            return [{elems[-1].lm: 1}]
        update(len(elems) - 1)

    basis = [elems[g] for g in G]
    # minimal basis then full interreduction
    minimal = []
    for e in sorted(basis, key=lambda e: key(e.lm)):
        if not any(mono_divides(o.lm, e.lm) for o in minimal):
            minimal.append(e)
    reduced = []
    for idx, e in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        r = _reduce(e.terms, others, key)
        reduced.append(_primitive_int(r, key))
    reduced.sort(key=lambda t: key(max(t, key=key)))
    return reduced


def groebner_basis(gens: Iterable[Poly], order: MonomialOrder = GREVLEX) -> list:
    """Reduced Groebner basis, each element with primitive integer content and positive leading coefficient."""
    gens = list(gens)
    if not gens:
        return []
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise ValueError("all generators must share a ring")
    key = order.key_function()
    polys = [_primitive_int(g.terms, key) for g in gens if g]
    # start from low leading terms; keeps intermediate growth down
    polys.sort(key=lambda t: key(max(t, key=key)))
    return [Poly._make(ring, {m: Fraction(c) for m, c in t.items()}) for t in _buchberger(polys, key)]


def is_unit_ideal(basis: Sequence[Poly]) -> bool:
    return any(g.constant_value() not in (None, 0) for g in basis)


def normal_form(f: Poly, basis: Sequence[Poly], order: MonomialOrder = GREVLEX) -> Poly:
    """Exact remainder of ``f`` on division by ``basis`` (linear in ``f``)."""
    key = order.key_function()
    reducers = []
    for g in basis:
        lm = max(g.terms, key=key)
        reducers.append((lm, g.terms[lm], g.terms))
    f_terms = dict(f.terms)
    rem: dict = {}
    while f_terms:
        m = max(f_terms, key=key)
        c = f_terms[m]
        for lm, lc, terms in reducers:
            if mono_divides(lm, m):
                q = mono_div(m, lm)
                factor = c / lc
                for gm, gc in terms.items():
                    mm = mono_mul(gm, q)
                    s = f_terms.get(mm, 0) - factor * gc
                    if s:
                        f_terms[mm] = s
                    else:
                        f_terms.pop(mm, None)
                break
        else:
            rem[m] = c
            del f_terms[m]
    return Poly._make(f.ring, rem)


def leading_monomials(basis: Sequence[Poly], order: MonomialOrder = GREVLEX) -> list:
    return [g.leading_monomial(order) for g in basis]


def s_polynomial(f: Poly, g: Poly, order: MonomialOrder = GREVLEX) -> Poly:
    lf, lg = f.leading_monomial(order), g.leading_monomial(order)
    lcm = mono_lcm(lf, lg)
    return (f.mul_monomial(mono_div(lcm, lf), 1 / f.terms[lf])
            - g.mul_monomial(mono_div(lcm, lg), 1 / g.terms[lg]))


def _reordered_ring(ring: Ring, front: Sequence[str]) -> Ring:
    front = list(front)
    back = [n for n in ring.names if n not in front]
    return Ring(tuple(front) + tuple(back), (len(front), len(back)))


def eliminate(gens: Sequence[Poly], drop_vars: Sequence[str]) -> list:
    """Groebner basis of the elimination ideal ``<gens>`` intersected with the subring without ``drop_vars``."""
    gens = [g for g in gens if g]
    if not gens:
        return []
    ring = gens[0].ring
    drop = [v if isinstance(v, str) else ring.names[v] for v in drop_vars]
    for v in drop:
        ring.index(v)
    work = _reordered_ring(ring, drop)
    keep_ring = Ring(tuple(n for n in ring.names if n not in drop))
    gb = groebner_basis([g.embed(work) for g in gens], block_order(len(drop)))
    k = len(drop)
    out = []
    for g in gb:
        if all(not any(m[:k]) for m in g.terms):
            out.append(g.restrict(Ring(work.names[k:])).embed(keep_ring))
    return out


def _fresh_name(ring: Ring, stem: str) -> str:
    name = stem
    i = 0
    while name in ring.names:
        i += 1
        name = f"{stem}{i}"
    return name


def saturate(gens: Sequence[Poly], f: Poly) -> list:
    """Generators of ``(I : f^oo)`` via an auxiliary variable ``u`` with ``1 - u*f``."""
    if not f:
        raise ValueError("cannot saturate by the zero polynomial")
    ring = f.ring
    u = _fresh_name(ring, "_u")
    big = Ring((u,) + ring.names)
    ug = big.var(u)
    work = [g.embed(big) for g in gens if g] + [big.one() - ug * f.embed(big)]
    return eliminate(work, [u])


def intersect(a: Sequence[Poly], b: Sequence[Poly], ring: Ring | None = None) -> list:
    """Generators of the intersection of two ideals (``t*I + (1-t)*J``, eliminate ``t``)."""
    a = [g for g in a if g]
    b = [g for g in b if g]
    if ring is None:
        ring = (a or b)[0].ring
    if not a or not b:
        return []
    t = _fresh_name(ring, "_t")
    big = Ring((t,) + ring.names)
    tv = big.var(t)
    work = [tv * g.embed(big) for g in a] + [(big.one() - tv) * g.embed(big) for g in b]
    return eliminate(work, [t])


def saturate_irrelevant(gens: Sequence[Poly], variables: Sequence[str] | None = None) -> list:
    """Saturate by the ideal generated by ``variables`` (default: all ring variables).

    Computed variable by variable and intersected: ``I : m^oo = meet_i (I : x_i^oo)``.
    """
    gens = [g for g in gens if g]
    if not gens:
        return []
    ring = gens[0].ring
    names = list(variables) if variables is not None else list(ring.names)
    result = None
    for name in names:
        sat = saturate(gens, ring.var(name))
        if is_unit_ideal(sat):
            continue
        result = sat if result is None else intersect(result, sat, ring)
    if result is None:
        return [ring.one()]
    return groebner_basis(result)


def ideal_contains(basis: Sequence[Poly], f: Poly, order: MonomialOrder = GREVLEX) -> bool:
    """Membership test; ``basis`` must be a Groebner basis for ``order``."""
    return not normal_form(f, basis, order)
