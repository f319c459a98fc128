"""Height lower bounds evaluated from Arakelov degrees of line subbundles.

All inputs are exact rationals supplied by the caller.  Each evaluator
returns a :class:`BoundReport` whose steps are small expressions over the
inputs and earlier steps; :meth:`BoundReport.replay` re-evaluates them and
checks that every value and every recorded inequality is reproduced.
"""

from __future__ import annotations

import ast
import operator
from dataclasses import dataclass, field
from fractions import Fraction

from .bounds import JSequence, SurfaceProjectionData, e_linear_independence, k3_contact_bound, s_j_bound


@dataclass(frozen=True)
class SubbundleDegrees:
    """deg(L_0) <= .. <= deg(L_N) <= 0."""
    degs: tuple

    def __post_init__(self):
        degs = tuple(Fraction(v) for v in self.degs)
        if not degs:
            raise ValueError("need at least one degree")
        if any(a > b for a, b in zip(degs, degs[1:])):
            raise ValueError(f"degrees must be ascending: {[str(v) for v in degs]}")
        if degs[-1] > 0:
            raise ValueError("degrees of the line subbundles must be nonpositive")
        object.__setattr__(self, "degs", degs)

    @property
    def N(self) -> int:
        return len(self.degs) - 1


def _degrees(degs) -> tuple:
    return degs.degs if isinstance(degs, SubbundleDegrees) else SubbundleDegrees(tuple(degs)).degs


def shifted_weights(degs) -> tuple:
    """s_i = deg(L_N) - deg(L_i); descending with s_N = 0."""
    degs = _degrees(degs)
    s = tuple(degs[-1] - v for v in degs)
    assert all(a >= b for a, b in zip(s, s[1:])) and s[-1] == 0
    return s


# -- replayable reports ------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    name: str
    expr: str
    value: object


@dataclass(frozen=True)
class Inequality:
    left: str
    op: str  # ">=" | "<=" | "=="
    right: str


@dataclass
class BoundReport:
    formula: str
    inputs: dict
    bound: Fraction
    steps: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def replay(self) -> bool:
        """Re-evaluate every step from the inputs; True iff all values and checks reproduce."""
        env = dict(self.inputs)
        for step in self.steps:
            value = evaluate(step.expr, env)
            if value != step.value:
                return False
            env[step.name] = value
        for c in self.checks:
            a, b = evaluate(c.left, env), evaluate(c.right, env)
            if not _COMPARE[c.op](a, b):
                return False
        return env.get("bound") == self.bound


_COMPARE = {">=": operator.ge, "<=": operator.le, "==": operator.eq}


class _Builder:
    def __init__(self, formula: str, inputs: dict):
        self.formula = formula
        self.inputs = inputs
        self.env = dict(inputs)
        self.steps: list = []
        self.checks: list = []

    def step(self, name: str, expr: str):
        value = evaluate(expr, self.env)
        self.env[name] = value
        self.steps.append(Step(name, expr, value))
        return value

    def check(self, left: str, op: str, right: str) -> bool:
        ok = _COMPARE[op](evaluate(left, self.env), evaluate(right, self.env))
        self.checks.append(Inequality(left, op, right))
        return ok

    def report(self, **extra) -> BoundReport:
        return BoundReport(self.formula, self.inputs, self.env["bound"], self.steps, self.checks, extra)


def _sj_from_env(s, J, e, pairs):
    data = SurfaceProjectionData(len(e) - 1, tuple(e),
                                 {(a, b): v for (a, b), v in zip(zip(J, J[1:]), pairs)})
    return s_j_bound(s, JSequence(tuple(J)), data)


_FUNCTIONS = {
    "min": min,
    "max": max,
    "sum": lambda xs: sum(xs, Fraction(0)),
    "shift": shifted_weights,
    "contlinind": e_linear_independence,
    "k3": k3_contact_bound,
    "sj": _sj_from_env,
    "linear": lambda c, x: sum((Fraction(a) * b for a, b in zip(c, x)), Fraction(0)),
}

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def evaluate(expr: str, env: dict):
    """Exact evaluation of a restricted arithmetic expression (no attribute access, no calls
    outside a fixed table of evaluators)."""
    return _eval(ast.parse(expr, mode="eval").body, env)


def _eval(node, env):
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return Fraction(node.value)
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise NameError(f"unknown name {node.id!r} in step expression")
        return env[node.id]
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval(node.left, env), _eval(node.right, env))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_eval(node.operand, env)
    if isinstance(node, ast.Subscript):
        seq = _eval(node.value, env)
        if isinstance(node.slice, ast.Slice):
            lo = int(_eval(node.slice.lower, env)) if node.slice.lower else None
            hi = int(_eval(node.slice.upper, env)) if node.slice.upper else None
            return tuple(seq[lo:hi])
        return seq[int(_eval(node.slice, env))]
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCTIONS \
            and not node.keywords:
        args = [_eval(a, env) for a in node.args]
        fn = _FUNCTIONS[node.func.id]
        if node.func.id in ("min", "max") and len(args) == 1:
            return fn(args[0])
        return fn(*args)
    if isinstance(node, ast.Tuple):
        return tuple(_eval(e, env) for e in node.elts)
    raise ValueError(f"unsupported expression element: {ast.dump(node)}")


# -- evaluators -------------------------------------------------------------------


PSI_CHOICES = ("contlinind", "sj", "k3", "linear")


def theorem_one_bound(D: int, d: int, degs, psi: str, params: dict | None = None) -> BoundReport:
    """h >= (d+1) D deg(L_N) - psi(s) for a contact bound psi with psi(t x) = t psi(x).

    psi: "contlinind" (no params), "k3" (no params; D should be 2(N-1), d = 2),
    "sj" (params J, data: SurfaceProjectionData) or "linear" (params c).
    """
    degs = _degrees(degs)
    N = len(degs) - 1
    params = params or {}
    inputs = {"D": int(D), "d": int(d), "N": int(N), "degs": degs}
    if psi == "contlinind":
        if d >= N + 1:
            raise ValueError("need d < N+1")
        call = "contlinind(D, d, s)"
    elif psi == "k3":
        call = "k3(N, s)"
    elif psi == "sj":
        J = JSequence(tuple(params["J"]))
        data = params["data"]
        if J.N != N or data.N != N:
            raise ValueError("J-sequence or e-data inconsistent with N")
        inputs["J"] = J.indices
        inputs["e"] = data.e
        inputs["epair"] = tuple(data.pair(a, b) for a, b in zip(J.indices, J.indices[1:]))
        call = "sj(s, J, e, epair)"
    elif psi == "linear":
        c = tuple(Fraction(v) for v in params["c"])
        if len(c) != N + 1:
            raise ValueError(f"linear form needs {N + 1} coefficients")
        inputs["c"] = c
        call = "linear(c, s)"
    else:
        raise ValueError(f"psi must be one of {PSI_CHOICES}")
    b = _Builder(f"theorem_one[{psi}]", inputs)
    b.step("s", "shift(degs)")
    b.step("psi_s", call)
    b.step("lead", "(d + 1) * D * degs[N]")
    b.step("bound", "lead - psi_s")
    return b.report()


def mixed_bound(D: int, d: int, degs, J, data: SurfaceProjectionData) -> BoundReport:
    """Surface bound written directly in the degrees:
    (d+1) D deg(L_N) - sum_k (deg L_{j_{k+1}} - deg L_{j_k}) (e_{j_k} + e_{j_k j_{k+1}} + e_{j_{k+1}})."""
    degs = _degrees(degs)
    N = len(degs) - 1
    J = J if isinstance(J, JSequence) else JSequence(tuple(J))
    if J.N != N or data.N != N:
        raise ValueError("J-sequence or e-data inconsistent with N")
    inputs = {"D": int(D), "d": int(d), "N": int(N), "degs": degs, "e": data.e}
    pairs = list(zip(J.indices, J.indices[1:]))
    for k, (a, c) in enumerate(pairs):
        inputs[f"e_{a}_{c}"] = data.pair(a, c)
    b = _Builder("mixed", inputs)
    names = []
    for k, (a, c) in enumerate(pairs):
        b.step(f"t{k}", f"(degs[{c}] - degs[{a}]) * (e[{a}] + e_{a}_{c} + e[{c}])")
        names.append(f"t{k}")
    b.step("lead", "(d + 1) * D * degs[N]")
    b.step("bound", "lead - (" + " + ".join(names) + ")")
    return b.report()


def notmeet_bound(D: int, d: int, degs) -> BoundReport:
    """h >= D * sum_{i=N-d}^{N} deg(L_i)."""
    degs = _degrees(degs)
    N = len(degs) - 1
    if d >= N + 1:
        raise ValueError("need d < N+1")
    b = _Builder("notmeet", {"D": int(D), "d": int(d), "N": int(N), "degs": degs})
    b.step("bound", "D * sum(degs[N - d:])")
    report = b.report()
    via = theorem_one_bound(D, d, degs, "contlinind")
    if via.bound != report.bound:
        raise AssertionError("notmeet bound differs from theorem_one_bound")
    report.extra["theorem_one"] = via.bound
    return report


def k3_height_bound(N: int, degs) -> BoundReport:
    """h >= 2 max{(N-1)(deg L_0 + 2 deg L_N), -2(deg L_0 + 2 deg L_N) + 3 sum deg L_i}."""
    if N < 2:
        raise ValueError("need N >= 2")
    degs = _degrees(degs)
    if len(degs) != N + 1:
        raise ValueError(f"need {N + 1} degrees")
    b = _Builder("k3", {"N": int(N), "degs": degs})
    a = b.step("branch_a", "(N - 1) * (degs[0] + 2 * degs[N])")
    c = b.step("branch_b", "-2 * (degs[0] + 2 * degs[N]) + 3 * sum(degs)")
    b.step("half", "max(branch_a, branch_b)")
    b.step("bound", "2 * half")
    report = b.report(branch_a=a, branch_b=c)
    via = theorem_one_bound(2 * (N - 1), 2, degs, "k3")
    if via.bound != report.bound:
        raise AssertionError("K3 height bound differs from theorem_one_bound")
    report.extra["theorem_one"] = via.bound
    return report


def semistable_height_bound(N: int, degs) -> BoundReport:
    """Lower bound for h/((d+1)D) under semistability: the average degree.

    theorem_one_bound with psi(s) = (d+1) D sum(s)/(N+1), divided by (d+1) D.
    """
    degs = _degrees(degs)
    if len(degs) != N + 1:
        raise ValueError(f"need {N + 1} degrees")
    b = _Builder("semistable", {"N": int(N), "degs": degs})
    b.step("s", "shift(degs)")
    b.step("psi_over", "sum(s) / (N + 1)")
    b.step("bound", "degs[N] - psi_over")
    b.check("bound", "==", "sum(degs) / (N + 1)")
    return b.report(normalization="h/((d+1)D)")


class ChainHypothesisError(ValueError):
    """The inputs violate a premise of the chain."""


def main_theorem_chain(D: int, d: int, N: int, h_over_deg, eps, degs) -> BoundReport:
    """From -avg(deg) <= h/D + eps and h/((d+1)D) >= avg(deg) derive h/((d+1)D) >= -eps/(d+2).

    ``bound`` is -eps/(d+2); ``extra["value"]`` is x = h/((d+1)D), which
    equals the bound exactly when both premises are equalities.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    degs = _degrees(degs)
    if len(degs) != N + 1:
        raise ValueError(f"need {N + 1} degrees")
    b = _Builder("chain", {"D": int(D), "d": int(d), "N": int(N),
                           "h_over_deg": Fraction(h_over_deg), "eps": eps, "degs": degs})
    b.step("x", "h_over_deg / (d + 1)")
    b.step("avg", "sum(degs) / (N + 1)")
    if not b.check("-avg", "<=", "h_over_deg + eps"):
        raise ChainHypothesisError("-avg(deg) <= h/deg + eps fails for these inputs")
    if not b.check("x", ">=", "avg"):
        raise ChainHypothesisError("h/((d+1)D) >= avg(deg) fails: inputs are not those of a semistable X")
    assert b.check("x", ">=", "-h_over_deg - eps")
    assert b.check("x", ">=", "-(d + 1) * x - eps")
    assert b.check("(d + 2) * x", ">=", "-eps")
    b.step("bound", "-eps / (d + 2)")
    assert b.check("x", ">=", "bound")
    report = b.report()
    report.extra["value"] = b.env["x"]
    report.extra["tight"] = b.env["x"] == report.bound
    return report


def normalized_height_term(h, deg_module, N: int, d: int, D: int) -> Fraction:
    """h/((d+1)D) - deg/(N+1): one term of the infimum defining the normalized height."""
    if D < 1:
        raise ValueError("degree must be positive")
    return Fraction(h) / ((d + 1) * D) - Fraction(deg_module) / (N + 1)
