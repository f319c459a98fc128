"""Text formats: polynomials, variety files, weight files, basis lists and e-data.

Polynomials::

    3/2*x0^2*x1 - x2^3

``*`` is required between factors, ``^`` takes a nonnegative integer,
``p/q`` is a rational literal and parentheses group.  Whitespace is ignored.

Variety files are ``key: value`` lines; lines without a key continue the
previous value and ``#`` starts a comment::

    ring: x0, x1, x2          # or "ring: P2"
    ideal: x0*x2 - x1^2       # comma separated; the key may repeat
    param: s^2, s*t, t^2      # optional, with "param_vars: s, t"
    multiplicity: 2           # optional, for cycles
    ---                       # starts the next cycle component
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .bounds import SurfaceProjectionData
from .poly import Poly, Ring
from .variety import Cycle, ProjectiveVariety
from .weights import WeightFunction


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, col: int = 1, source: str = ""):
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{col}: {message}")
        self.line, self.col, self.message = line, col, message


class WeightOrderWarning(UserWarning):
    """Weights were given out of order and have been sorted."""


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


@dataclass
class _Tok:
    kind: str  # "num" | "name" | "op" | "end"
    text: str
    col: int


def _tokenize(text: str, line: int, col0: int) -> list:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else pos
        if m.group(1) is not None:
            toks.append(_Tok("num", m.group(1), col0 + start))
        elif m.group(2) is not None:
            toks.append(_Tok("name", m.group(2), col0 + start))
        elif m.group(3) is not None:
            if m.group(3) not in "+-*/^()":
                raise ParseError(f"unexpected character {m.group(3)!r}", line, col0 + start)
            toks.append(_Tok("op", m.group(3), col0 + start))
        pos = m.end()
    toks.append(_Tok("end", "", col0 + len(text)))
    return toks


class _PolyParser:
    def __init__(self, text: str, ring: Ring, line: int = 1, col0: int = 1, source: str = ""):
        self.ring = ring
        self.line = line
        self.source = source
        self.toks = _tokenize(text, line, col0)
        self.i = 0

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.toks[self.i]
        shown = tok.text or "end of input"
        raise ParseError(f"{msg} at {shown!r}", self.line, tok.col, self.source)

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def parse(self) -> Poly:
        if self.tok.kind == "end":
            self.error("empty polynomial")
        p = self.expr()
        if self.tok.kind != "end":
            self.error("expected '+', '-' or '*'")
        return p

    def expr(self) -> Poly:
        sign = 1
        if self.tok.kind == "op" and self.tok.text in "+-":
            sign = -1 if self.take().text == "-" else 1
        acc = self.term().scale(sign)
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.take().text
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> Poly:
        acc = self.factor()
        while True:
            t = self.tok
            if t.kind == "op" and t.text == "*":
                self.take()
                acc = acc * self.factor()
            elif t.kind in ("num", "name") or (t.kind == "op" and t.text == "("):
                self.error("missing '*' between factors")
            else:
                return acc

    def factor(self) -> Poly:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.take()
            t = self.tok
            if t.kind != "num":
                self.error("expected a nonnegative integer exponent")
            self.take()
            return base ** int(t.text)
        return base

    def atom(self) -> Poly:
        t = self.tok
        if t.kind == "num":
            self.take()
            value = Fraction(int(t.text))
            if self.tok.kind == "op" and self.tok.text == "/":
                self.take()
                d = self.tok
                if d.kind != "num":
                    self.error("expected an integer denominator")
                self.take()
                if int(d.text) == 0:
                    self.error("zero denominator", d)
                value /= int(d.text)
            return self.ring.const(value)
        if t.kind == "name":
            self.take()
            if t.text not in self.ring.names:
                self.error(f"unknown variable (ring has {', '.join(self.ring.names)})", t)
            return self.ring.var(t.text)
        if t.kind == "op" and t.text == "(":
            self.take()
            inner = self.expr()
            if not (self.tok.kind == "op" and self.tok.text == ")"):
                self.error("expected ')'")
            self.take()
            return inner
        self.error("expected a number, variable or '('")


def parse_polynomial(text: str, ring: Ring, line: int = 1, col: int = 1, source: str = "") -> Poly:
    return _PolyParser(text, ring, line, col, source).parse()


def parse_ring(text: str) -> Ring:
    text = text.strip()
    m = re.fullmatch(r"P\s*(\d+)", text)
    if m:
        return Ring(tuple(f"x{i}" for i in range(int(m.group(1)) + 1)))
    names = [n for n in re.split(r"[,\s]+", text) if n]
    for n in names:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", n):
            raise ParseError(f"invalid variable name {n!r}")
    if len(set(names)) != len(names):
        raise ParseError("duplicate variable names")
    if not names:
        raise ParseError("empty ring")
    return Ring(tuple(names))


def parse_rationals(text: str) -> list:
    out = []
    for piece in re.split(r"[,\s]+", text.strip()):
        if not piece:
            continue
        try:
            out.append(Fraction(piece))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not a rational number: {piece!r}") from None
    return out


# -- key/value files -----------------------------------------------------------------


@dataclass
class _Entry:
    key: str
    value: str
    line: int
    col: int  # column of the value text


@dataclass
class _Block:
    entries: list = field(default_factory=list)

    def get(self, key: str) -> list:
        return [e for e in self.entries if e.key == key]


def _strip_comment(line: str) -> str:
    k = line.find("#")
    return line if k < 0 else line[:k]


def _read_blocks(text: str, source: str, keys: Sequence[str]) -> list:
    blocks = [_Block()]
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        if line.strip() == "---":
            blocks.append(_Block())
            current = None
            continue
        m = re.match(r"\s*([A-Za-z_]+)\s*:", line)
        if m and m.group(1) in keys:
            current = _Entry(m.group(1), line[m.end():], lineno, m.end() + 1)
            blocks[-1].entries.append(current)
        elif m:
            raise ParseError(f"unknown key {m.group(1)!r}", lineno, m.start(1) + 1, source)
        elif current is None:
            raise ParseError("expected 'key: value'", lineno, 1, source)
        else:
            current.value += "\n" + line
    return [b for b in blocks if b.entries]


_CONTINUES = "+-*/^("


def _separators(value: str) -> list:
    """Positions of item separators: commas, and newlines not inside a broken expression."""
    seps = [False] * len(value)
    for i, ch in enumerate(value):
        if ch == ",":
            seps[i] = True
        elif ch == "\n":
            before = value[:i].rstrip()
            after = value[i + 1:].lstrip()
            if before and after and before[-1] not in _CONTINUES + "," and after[0] not in _CONTINUES[:-1] + ")":
                seps[i] = True
    return seps


def _split_items(entry: _Entry) -> list:
    """Items separated by commas or line breaks, with the (line, col) where each starts.

    A line break inside an expression (previous line ending in an operator,
    or next line starting with one) continues the item.
    """
    items = []
    line, col = entry.line, entry.col
    buf, start = "", None
    seps = _separators(entry.value) + [True]
    for k, ch in enumerate(entry.value + ","):
        if seps[k]:
            if buf.strip():
                items.append((buf, start))
            buf, start = "", None
        else:
            if start is None and not ch.isspace():
                start = (line, col)
            if start is not None:
                buf += ch
        if ch == "\n":
            line, col = line + 1, 1
        else:
            col += 1
    return items


def _parse_component(block: _Block, source: str) -> tuple:
    rings = block.get("ring")
    if len(rings) != 1:
        raise ParseError("each component needs exactly one 'ring:' line",
                         block.entries[0].line, 1, source)
    try:
        ring = parse_ring(rings[0].value)
    except ParseError as exc:
        raise ParseError(exc.message, rings[0].line, rings[0].col, source) from None
    gens = []
    for entry in block.get("ideal"):
        for text, (ln, col) in _split_items(entry):
            g = parse_polynomial(text.replace("\n", " "), ring, ln, col, source)
            if not g.is_homogeneous():
                raise ParseError(f"generator {g} is not homogeneous", ln, col, source)
            gens.append(g)
    param = None
    params = block.get("param")
    if params:
        pv = block.get("param_vars")
        pring = parse_ring(pv[0].value) if pv else Ring(("s", "t"))
        if pring.ngens != 2:
            raise ParseError("param_vars must name exactly two variables", pv[0].line, pv[0].col, source)
        param = []
        for entry in params:
            for text, (ln, col) in _split_items(entry):
                param.append(parse_polynomial(text.replace("\n", " "), pring, ln, col, source))
    mult = 1
    ms = block.get("multiplicity")
    if ms:
        try:
            mult = int(ms[0].value.strip())
        except ValueError:
            raise ParseError("multiplicity must be a positive integer", ms[0].line, ms[0].col, source) from None
        if mult < 1:
            raise ParseError("multiplicity must be a positive integer", ms[0].line, ms[0].col, source)
    names = block.get("name")
    name = names[0].value.strip() if names else ""
    if not gens and param is None:
        raise ParseError("component needs 'ideal:' or 'param:'", block.entries[0].line, 1, source)
    try:
        X = ProjectiveVariety(ring, gens, param, name=name)
    except ValueError as exc:
        raise ParseError(str(exc), block.entries[0].line, 1, source) from None
    return X, mult


_VARIETY_KEYS = ("ring", "ideal", "param", "param_vars", "multiplicity", "name")


def parse_variety_text(text: str, source: str = ""):
    """A ProjectiveVariety, or a Cycle when there are several components or a multiplicity."""
    blocks = _read_blocks(text, source, _VARIETY_KEYS)
    if not blocks:
        raise ParseError("empty variety file", 1, 1, source)
    comps = [_parse_component(b, source) for b in blocks]
    if len(comps) == 1 and comps[0][1] == 1:
        return comps[0][0]
    try:
        return Cycle(comps)
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1, source) from None


def load_variety(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse_variety_text(fh.read(), source=str(path))


# -- weights and bases -------------------------------------------------------------------


def sorted_weight_function(r: Sequence, columns: Sequence[Sequence] | None = None) -> WeightFunction:
    """WeightFunction from weights and optional adapted vectors (one per weight).

    Out-of-order weights are sorted descending with their vectors, emitting
    a :class:`WeightOrderWarning`.
    """
    r = [Fraction(v) for v in r]
    n = len(r)
    basis = None
    if columns is not None:
        if len(columns) != n or any(len(c) != n for c in columns):
            raise ValueError("need one adapted vector of length N+1 per weight")
        basis = [[Fraction(columns[j][i]) for j in range(n)] for i in range(n)]
    if any(r[i] < r[i + 1] for i in range(n - 1)):
        w, perm = WeightFunction.normalized(r, basis)
        warnings.warn(f"weights sorted descending; adapted order is now {list(perm)}", WeightOrderWarning,
                      stacklevel=2)
        return w
    return WeightFunction(basis, r) if basis is not None else WeightFunction.diagonal(r)


def parse_weight_text(text: str, source: str = "") -> WeightFunction:
    """``weights: 2 1 0`` plus optional ``basis:`` followed by one adapted vector per line."""
    blocks = _read_blocks(text, source, ("weights", "basis"))
    if len(blocks) != 1 or len(blocks[0].get("weights")) != 1:
        raise ParseError("weight file needs exactly one 'weights:' entry", 1, 1, source)
    entry = blocks[0].get("weights")[0]
    try:
        r = parse_rationals(entry.value)
    except ParseError as exc:
        raise ParseError(exc.message, entry.line, entry.col, source) from None
    columns = None
    bentries = blocks[0].get("basis")
    if bentries:
        b = bentries[0]
        columns = []
        for k, row in enumerate(l for l in b.value.splitlines() if l.strip()):
            try:
                columns.append(parse_rationals(row))
            except ParseError as exc:
                raise ParseError(exc.message, b.line + k, 1, source) from None
    try:
        return sorted_weight_function(r, columns)
    except ValueError as exc:
        raise ParseError(str(exc), entry.line, entry.col, source) from None


def load_weights(path: str) -> WeightFunction:
    with open(path, encoding="utf-8") as fh:
        return parse_weight_text(fh.read(), source=str(path))


def parse_bases_text(text: str, source: str = "") -> list:
    """Matrices separated by '---' or blank lines; each line is one basis vector (a column)."""
    mats, cur = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line or line == "---":
            if cur:
                mats.append(cur)
                cur = []
            continue
        try:
            cur.append(parse_rationals(line))
        except ParseError as exc:
            raise ParseError(exc.message, lineno, 1, source) from None
    if cur:
        mats.append(cur)
    out = []
    for cols in mats:
        n = len(cols)
        if any(len(c) != n for c in cols):
            raise ParseError("basis must be square", 1, 1, source)
        out.append(tuple(tuple(cols[j][i] for j in range(n)) for i in range(n)))
    return out


def load_bases(path: str) -> list:
    with open(path, encoding="utf-8") as fh:
        return parse_bases_text(fh.read(), source=str(path))


def parse_edata_text(text: str, source: str = "") -> SurfaceProjectionData:
    """``e: e_0 .. e_N`` and any number of ``pair: i j value`` lines."""
    blocks = _read_blocks(text, source, ("e", "pair"))
    if len(blocks) != 1 or len(blocks[0].get("e")) != 1:
        raise ParseError("e-data needs exactly one 'e:' entry", 1, 1, source)
    entry = blocks[0].get("e")[0]
    e = parse_rationals(entry.value)
    pairs = {}
    for p in blocks[0].get("pair"):
        vals = parse_rationals(p.value)
        if len(vals) != 3 or vals[0].denominator != 1 or vals[1].denominator != 1:
            raise ParseError("expected 'pair: i j value'", p.line, p.col, source)
        pairs[(int(vals[0]), int(vals[1]))] = vals[2]
    try:
        return SurfaceProjectionData(len(e) - 1, tuple(e), pairs)
    except ValueError as exc:
        raise ParseError(str(exc), entry.line, entry.col, source) from None


def load_edata(path: str) -> SurfaceProjectionData:
    with open(path, encoding="utf-8") as fh:
        return parse_edata_text(fh.read(), source=str(path))
