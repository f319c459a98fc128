"""Command-line interface.

Exit codes: 0 ok, 2 input/parse error, 3 resource ceiling, 4 failed cross-check
or certificate.  Reports are deterministic: keys sorted, rationals as "p/q"
strings, and timings only with ``--timings``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from fractions import Fraction

from . import chow as chow_mod
from .bounds import JSequence, e_linear_independence, k3_contact_bound, last_coordinates_avoid, s_j_bound
from .chow import (ChowForm, ChowFormError, ResourceLimitError, bracket_expansion, chow_form_elimination,
                   chow_form_from_parametrization, chow_polytope, chow_ring, degree_of_contact, same_form)
from .heights import (k3_height_bound, main_theorem_chain, normalized_height_term, notmeet_bound,
                      semistable_height_bound, theorem_one_bound)
from .lp import LPSizeError
from .parse import (ParseError, WeightOrderWarning, load_bases, load_edata, load_variety, load_weights,
                    parse_polynomial, parse_rationals, sorted_weight_function)
from .semistability import SCOPE_NOTE, UNSTABLE, Destabilizer, Witness, check_weight, test_under_bases
from .variety import Cycle, StabilizationError, degree_of_contact_asymptotic
from .weights import WeightFunction

EXIT_OK, EXIT_PARSE, EXIT_CEILING, EXIT_CHECK = 0, 2, 3, 4


class CrossCheckError(RuntimeError):
    pass


# -- serialization -------------------------------------------------------------------


def to_json(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        raise TypeError("floats are not allowed in reports")
    if isinstance(obj, dict):
        return {str(k): to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_json(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit(report: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(to_json(report), sort_keys=True, indent=2)
    return "\n".join(_text_lines(to_json(report), ""))


def _text_lines(obj, indent: str) -> list:
    lines = []
    for key in sorted(obj):
        value = obj[key]
        if key == "polytope" and isinstance(value, dict) and "points" in value:
            verts = {tuple(v) for v in value.get("vertices", [])}
            lines.append(f"{indent}{key}:")
            for p in value["points"]:
                star = " *" if tuple(p) in verts else ""
                lines.append(f"{indent}  {_flat(p)}{star}")
        elif isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.extend(_text_lines(value, indent + "  "))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{indent}{key}:")
            for k, item in enumerate(value):
                lines.append(f"{indent}  [{k}]")
                lines.extend(_text_lines(item, indent + "    "))
        elif isinstance(value, list):
            lines.append(f"{indent}{key}: {_flat(value) if value else '(none)'}")
        else:
            lines.append(f"{indent}{key}: {value}")
    return lines


def _flat(value) -> str:
    if isinstance(value, list):
        return "(" + ", ".join(_flat(v) for v in value) + ")"
    return str(value)


# -- helpers -------------------------------------------------------------------------


def _rationals_arg(text: str) -> list:
    return parse_rationals(text)


def _ints_arg(text: str) -> list:
    vals = parse_rationals(text)
    if any(v.denominator != 1 for v in vals):
        raise ParseError(f"expected integers: {text!r}")
    return [int(v) for v in vals]


def _weight_function(args) -> WeightFunction:
    if getattr(args, "weights_file", None):
        return load_weights(args.weights_file)
    if not getattr(args, "weights", None):
        raise ParseError("give --weights or --weights-file")
    return sorted_weight_function(_rationals_arg(args.weights))


def _form_report(F: ChowForm) -> dict:
    return {"N": F.N, "d": F.d, "D": F.D, "form": str(F.poly),
            "multidegree": [F.D] * (F.d + 1), "terms": len(F.poly.terms)}


def _polytope_report(P) -> dict:
    return {"points": [list(p) for p in P.points], "vertices": [list(v) for v in P.vertices],
            "D": P.D, "d": P.d}


def _weight_report(w: WeightFunction) -> dict:
    return {"weights": list(w.weights), "basis_columns": [w.column(j) for j in range(w.dim)]}


def _load(args):
    X = load_variety(args.input)
    if not getattr(args, "saturate", False):
        return X
    if isinstance(X, Cycle):
        return Cycle([(Y.saturated(), n) for Y, n in X.components])
    return X.saturated()


def _chow(X, args) -> ChowForm:
    route = getattr(args, "chow_route", "auto")
    if route == "both":
        route = "auto"
    if isinstance(X, Cycle):
        return chow_mod.cycle_chow_form(X, route)
    if route == "elimination" or X.param is None:
        return chow_form_elimination(X, max_variables=args.max_variables)
    return chow_form_from_parametrization(X)


# -- commands --------------------------------------------------------------------------


def cmd_contact(args) -> dict:
    X = _load(args)
    w = _weight_function(args)
    routes = ["asymptotic", "polytope", "brackets"] if args.route == "all" else [args.route]
    results = {}
    F = None
    for route in routes:
        if route == "asymptotic":
            results[route] = degree_of_contact_asymptotic(X, w, args.max_degree)
        else:
            if F is None:
                F = _chow(X, args)
                if not w.is_diagonal():
                    F = F.in_basis(w.basis)
            obj = bracket_expansion(F) if route == "brackets" else chow_polytope(F, args.max_lp_size)
            results[route] = degree_of_contact(obj, w.weights, route)
    agree = len(set(results.values())) == 1
    report = {"command": "contact", "inputs": {"input": args.input, **_weight_report(w)},
              "results": {"e_w": results, "cross_check": "pass" if agree else "fail"}}
    if not agree:
        raise CrossCheckError(report)
    return report


def cmd_chowform(args) -> dict:
    X = _load(args)
    results = {}
    if args.chow_route == "both":
        if isinstance(X, Cycle):
            raise ParseError("--chow-route both needs a single variety")
        A = chow_form_elimination(X, max_variables=args.max_variables)
        B = chow_form_from_parametrization(X)
        ok = same_form(A, B)
        results = {"elimination": _form_report(A), "parametrization": _form_report(B),
                   "cross_check": "pass" if ok else "fail"}
        report = {"command": "chowform", "inputs": {"input": args.input}, "results": results}
        if not ok:
            raise CrossCheckError(report)
        return report
    F = _chow(X, args)
    return {"command": "chowform", "inputs": {"input": args.input, "route": args.chow_route},
            "results": _form_report(F)}


def cmd_polytope(args) -> dict:
    X = _load(args)
    F = _chow(X, args)
    P = chow_polytope(F, args.max_lp_size)
    return {"command": "polytope", "inputs": {"input": args.input}, "results": {"polytope": _polytope_report(P)}}


def _verdict_report(v, F: ChowForm) -> dict:
    out = {"status": v.status, "scope": [[list(row) for row in B] for B in v.scope]}
    c = v.certificate
    if isinstance(c, Destabilizer):
        out["certificate"] = {"kind": "destabilizing_weight", **_weight_report(c.weight),
                              "lhs": c.lhs, "rhs": c.rhs, "chow_form": str(F.poly),
                              "N": F.N, "d": F.d, "D": F.D}
    elif isinstance(c, Witness):
        out["certificate"] = {"kind": "convex_combination", "points": [list(p) for p in c.points],
                              "coefficients": list(c.coefficients), "target": list(c.target)}
    return out


def cmd_semistable(args) -> dict:
    X = _load(args)
    bases = load_bases(args.bases) if args.bases else None
    if args.random is not None and args.random < 1:
        raise ParseError("--random needs a positive count")
    F = _chow(X, args)
    verdicts = test_under_bases(X, bases, args.random, args.seed, route=args.basis_route, form=F)
    entries = [_verdict_report(v, F) for v in verdicts]
    status = UNSTABLE if any(v.unstable for v in verdicts) else verdicts[0].status
    warnings_out = [] if status == UNSTABLE else [SCOPE_NOTE]
    for v in verdicts:
        if isinstance(v.certificate, Destabilizer):
            lhs, rhs, ok = check_weight(F, v.certificate.weight)
            if ok or (lhs, rhs) != (v.certificate.lhs, v.certificate.rhs):
                raise CrossCheckError({"command": "semistable", "error": "certificate failed to re-verify"})
    return {"command": "semistable",
            "inputs": {"input": args.input, "bases": args.bases, "random": args.random, "seed": args.seed},
            "results": {"status": status, "verdicts": entries}, "warnings": warnings_out}


def _certificates(doc) -> list:
    if isinstance(doc, dict) and doc.get("kind") == "destabilizing_weight":
        return [doc]
    out = []
    if isinstance(doc, dict):
        for v in doc.values():
            out.extend(_certificates(v))
    elif isinstance(doc, list):
        for v in doc:
            out.extend(_certificates(v))
    return out


def cmd_verify(args) -> dict:
    with open(args.certificate, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno, args.certificate) from None
    certs = _certificates(doc)
    if not certs:
        raise ParseError("no destabilizing certificate found", 1, 1, args.certificate)
    X = _load(args) if args.input else None
    results = []
    for c in certs:
        N, d, D = int(c["N"]), int(c["d"]), int(c["D"])
        if X is not None:
            F = _chow(X, args)
        else:
            F = ChowForm(N, d, D, parse_polynomial(c["chow_form"], chow_ring(N, d)))
        cols = [[Fraction(v) for v in col] for col in c["basis_columns"]]
        n = len(cols)
        basis = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
        w = WeightFunction(basis, tuple(Fraction(v) for v in c["weights"]))
        lhs, rhs, ok = check_weight(F, w)
        matches = lhs == Fraction(c["lhs"]) and rhs == Fraction(c["rhs"])
        results.append({"lhs": lhs, "rhs": rhs, "violated": not ok, "matches_claim": matches})
    good = all(r["violated"] and r["matches_claim"] for r in results)
    report = {"command": "verify", "inputs": {"certificate": args.certificate, "input": args.input},
              "results": {"certificates": results, "verified": good}}
    if not good:
        raise CrossCheckError(report)
    return report


def cmd_bounds(args) -> dict:
    r = _rationals_arg(args.r)
    inputs = {"r": r}
    if args.kind == "contlinind":
        value = e_linear_independence(args.D, args.d, r)
        inputs.update(D=args.D, d=args.d)
        results = {"bound": value, "formula": "D*(r_{N-d}+...+r_N)"}
        if args.input:
            X = _load(args)
            results["hypothesis_verified"] = last_coordinates_avoid(X, args.d + 1)
    elif args.kind == "sj":
        if not args.J or not args.edata:
            raise ParseError("bounds sj needs --J and --edata")
        J = JSequence(tuple(_ints_arg(args.J)))
        data = load_edata(args.edata)
        value = s_j_bound(r, J, data)
        inputs.update(J=list(J.indices), e=list(data.e),
                      e_pair={f"{a},{b}": v for (a, b), v in sorted(data.e_pair.items())})
        results = {"bound": value, "formula": "sum_k (r_jk - r_jk+1)(e_jk + e_jk,jk+1 + e_jk+1)"}
    else:
        N = args.N if args.N is not None else len(r) - 1
        value = k3_contact_bound(N, r)
        inputs.update(N=N)
        results = {"bound": value, "formula": "min{-4 r_0 + 6 sum r_i, 2(N-1) r_0}"}
    return {"command": f"bounds {args.kind}", "inputs": inputs, "results": results}


def _bound_report(rep) -> dict:
    return {"formula": rep.formula, "bound": rep.bound,
            "steps": [{"name": s.name, "expr": s.expr, "value": s.value} for s in rep.steps],
            "checks": [f"{c.left} {c.op} {c.right}" for c in rep.checks],
            "extra": rep.extra, "replay": rep.replay()}


def cmd_heights(args) -> dict:
    degs = _rationals_arg(args.degs) if args.degs else None
    kind = args.kind
    if kind != "nheight" and degs is None:
        raise ParseError(f"heights {kind} needs --degs")
    N = args.N if args.N is not None else (len(degs) - 1 if degs else None)
    if kind == "thm1":
        params = {}
        if args.psi == "sj":
            if not args.J or not args.edata:
                raise ParseError("psi sj needs --J and --edata")
            params = {"J": _ints_arg(args.J), "data": load_edata(args.edata)}
        elif args.psi == "linear":
            if not args.c:
                raise ParseError("psi linear needs --c")
            params = {"c": _rationals_arg(args.c)}
        rep = theorem_one_bound(args.D, args.d, degs, args.psi, params)
    elif kind == "notmeet":
        rep = notmeet_bound(args.D, args.d, degs)
    elif kind == "k3":
        rep = k3_height_bound(N, degs)
    elif kind == "semistable":
        rep = semistable_height_bound(N, degs)
    elif kind == "chain":
        if args.eps is None or args.h_over_deg is None:
            raise ParseError("heights chain needs --eps and --h-over-deg")
        rep = main_theorem_chain(args.D, args.d, N, Fraction(args.h_over_deg), Fraction(args.eps), degs)
    else:
        if args.h is None or args.deg_module is None or N is None:
            raise ParseError("heights nheight needs --h, --deg-module and --N")
        value = normalized_height_term(Fraction(args.h), Fraction(args.deg_module), N, args.d, args.D)
        return {"command": "heights nheight",
                "inputs": {"h": Fraction(args.h), "deg_module": Fraction(args.deg_module), "N": N,
                           "d": args.d, "D": args.D},
                "results": {"value": value}}
    inputs = {k: v for k, v in rep.inputs.items()}
    if not rep.replay():
        raise CrossCheckError({"command": f"heights {kind}", "error": "derivation failed to replay"})
    return {"command": f"heights {kind}", "inputs": inputs, "results": _bound_report(rep)}


# -- argument parsing ---------------------------------------------------------------------


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chowlab", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings (non-deterministic)")
    common.add_argument("--max-degree", type=_positive, default=None,
                        help="ceiling on the level m (default: 2d+3 + 4(d+2); env CHOWLAB_MAX_DEGREE)")
    common.add_argument("--max-lp-size", type=_positive, default=None)
    common.add_argument("--max-variables", type=_positive, default=chow_mod.DEFAULT_MAX_VARIABLES)
    common.add_argument("--saturate", action="store_true",
                        help="saturate input ideals by the irrelevant ideal before use")
    common.add_argument("--chow-route", choices=("auto", "elimination", "parametrization", "both"),
                        default="auto")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("contact", parents=[common], help="degree of contact e_w(X)")
    c.add_argument("--input", required=True)
    c.add_argument("--weights")
    c.add_argument("--weights-file")
    c.add_argument("--route", choices=("asymptotic", "polytope", "brackets", "all"), default="all")
    c.set_defaults(func=cmd_contact)

    c = sub.add_parser("chowform", parents=[common], help="Chow form")
    c.add_argument("--input", required=True)
    c.set_defaults(func=cmd_chowform)

    c = sub.add_parser("polytope", parents=[common], help="Chow polytope")
    c.add_argument("--input", required=True)
    c.set_defaults(func=cmd_polytope)

    c = sub.add_parser("semistable", parents=[common], help="semistability test with certificates")
    c.add_argument("--input", required=True)
    c.add_argument("--bases")
    c.add_argument("--random", type=int)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--basis-route", choices=("substitution", "elimination"), default="substitution")
    c.set_defaults(func=cmd_semistable)

    c = sub.add_parser("verify", parents=[common], help="re-check a destabilizing certificate")
    c.add_argument("--certificate", required=True)
    c.add_argument("--input", help="recompute the Chow form from a variety instead of the certificate")
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("bounds", parents=[common], help="contact bounds")
    c.add_argument("kind", choices=("contlinind", "sj", "k3"))
    c.add_argument("--r", required=True)
    c.add_argument("--D", type=int)
    c.add_argument("--d", type=int)
    c.add_argument("--N", type=int)
    c.add_argument("--J")
    c.add_argument("--edata")
    c.add_argument("--input", help="variety for the optional non-meeting hypothesis check")
    c.set_defaults(func=cmd_bounds)

    c = sub.add_parser("heights", parents=[common], help="height lower bounds")
    c.add_argument("kind", choices=("thm1", "notmeet", "k3", "semistable", "chain", "nheight"))
    c.add_argument("--degs")
    c.add_argument("--D", type=int, default=1)
    c.add_argument("--d", type=int, default=1)
    c.add_argument("--N", type=int)
    c.add_argument("--psi", choices=("contlinind", "sj", "k3", "linear"), default="contlinind")
    c.add_argument("--J")
    c.add_argument("--edata")
    c.add_argument("--c")
    c.add_argument("--eps")
    c.add_argument("--h-over-deg")
    c.add_argument("--h")
    c.add_argument("--deg-module")
    c.set_defaults(func=cmd_heights)
    return p


_VALUE_FLAGS = {"--weights", "--r", "--degs", "--c", "--eps", "--h-over-deg", "--h", "--deg-module", "--J"}


def _join_negative_values(argv: list) -> list:
    """Let ``--degs -2,-1,0`` work: argparse would read the value as an option."""
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") and len(argv[i + 1]) > 1 \
                and (argv[i + 1][1].isdigit() or argv[i + 1][1] == "."):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def run(argv=None) -> tuple:
    """Parse and execute; returns (exit code, output text, diagnostic text)."""
    parser = build_parser()
    args = parser.parse_args(_join_negative_values(list(sys.argv[1:] if argv is None else argv)))
    if args.command == "bounds" and args.kind == "contlinind" and (args.D is None or args.d is None):
        parser.error("bounds contlinind needs --D and --d")
    fmt = args.format
    start = time.perf_counter()
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", WeightOrderWarning)
            report = args.func(args)
        notes = [str(w.message) for w in caught if issubclass(w.category, WeightOrderWarning)]
        if notes:
            report.setdefault("warnings", [])
            report["warnings"] = notes + report["warnings"]
        report.setdefault("warnings", [])
        if args.timings:
            report["timings"] = {"seconds": f"{time.perf_counter() - start:.3f}"}
        return EXIT_OK, emit(report, fmt), ""
    except CrossCheckError as exc:
        payload = exc.args[0] if exc.args and isinstance(exc.args[0], dict) else {"error": str(exc)}
        return EXIT_CHECK, emit(payload, fmt), "cross-check failed"
    except ParseError as exc:
        return EXIT_PARSE, "", f"parse error: {exc}"
    except (ResourceLimitError, StabilizationError, LPSizeError) as exc:
        return EXIT_CEILING, "", f"resource ceiling: {exc}"
    except (ValueError, KeyError, OSError, ChowFormError) as exc:
        return EXIT_PARSE, "", f"input error: {exc}"


def main(argv=None) -> int:
    code, out, err = run(argv)
    if out:
        print(out)
    if err:
        print(err, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
