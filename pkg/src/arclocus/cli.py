"""Command-line interface: parse JSON documents, dispatch, and emit
deterministic reports.

Exit codes: 0 on success with all checked properties holding, 1 when a
checked property fails (an adjunction identity, a semicontinuity
inequality, a threshold check, disagreeing methods), 2 on input errors,
3 when a computation would exceed the enumeration budget.

Reports are JSON (default) or GitHub-flavored Markdown tables with
``--format md``.  Identical inputs and flags produce byte-identical
output: rationals are printed as "a/b" strings, the infinities as
"-inf"/"+inf", and keys are emitted in sorted order.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from .errors import (BudgetError, DisagreementError, InputError,
                     LiftingObstructionError)
from .extended import ExtendedRational, frac
from .jet_engine import (DEFAULT_BUDGET, classify_hypersurface,
                         count_jet_points, jet_equations, newton_lift)
from .lattice_opt import solve_piecewise
from .monomial_arcs import mld_program, contact_program
from .resolution_model import (classical_pair_codim, contact_codim_exact,
                               contact_codim_ge, mld_at_generic_point,
                               mld_bound_check, mld_on_w)
from .schemas import (load_adjunction_case, load_arc, load_center,
                      load_hypersurface, load_monomial_pair, load_pair,
                      load_query, load_resolution_data,
                      load_semicontinuity_case, parse_center_flag,
                      validate_document, validate_report)
from .theorem_lab import check_inversion_of_adjunction, check_semicontinuity

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def _enc(value):
    """Encode a value for the report: exact strings, never floats."""
    if isinstance(value, ExtendedRational):
        return value.to_string()
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_enc(v) for v in value]
    if isinstance(value, dict):
        return {k: _enc(v) for k, v in value.items()}
    if isinstance(value, frozenset):
        return sorted(value)
    return value


def _load_document(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    return doc


def _render(report: dict, fmt: str) -> str:
    validate_report(report)
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    lines = ["| field | value |", "| --- | --- |"]

    def flatten(prefix, obj):
        if isinstance(obj, dict):
            for key in sorted(obj):
                flatten(f"{prefix}.{key}" if prefix else key, obj[key])
        else:
            rendered = json.dumps(obj, sort_keys=True)
            lines.append(f"| {prefix} | {rendered} |")

    flatten("", report)
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# Command handlers: return (results dict, exit code)
# ----------------------------------------------------------------------

def _cmd_contact_codim(doc, kind, args):
    if kind == "resolution_data":
        data = load_resolution_data(doc["resolution_data"])
        pair = load_pair(doc.get("pair"))
        contact = doc.get("contact")
        if contact is None:
            raise InputError("contact-codim needs a 'contact' section with m, e")
        m = contact["m"]
        e = contact.get("e", 0)
        results = {
            "codim_exact_orders": _enc(contact_codim_exact(
                data, m, e, pair.w_is_proper)),
            "codim_min_orders": _enc(contact_codim_ge(
                data, m, e, pair.w_is_proper)),
        }
        if data.k_ideals == 0:
            results["codim_classical"] = _enc(classical_pair_codim(data, e))
        return results, EXIT_OK
    if kind == "monomial_pair":
        pair = load_monomial_pair(doc["monomial_pair"])
        contact = doc.get("contact")
        if contact is None:
            raise InputError("contact-codim needs a 'contact' section with m")
        center = _resolve_center(doc, args, pair.d)
        prog = contact_program(pair.ideals, contact["m"], center)
        sol = solve_piecewise(prog)
        return {"codim": _enc(sol.value),
                "witness_weights": _enc(sol.witness)}, EXIT_OK
    raise InputError(f"contact-codim does not accept {kind} documents")


def _resolve_center(doc, args, d):
    if getattr(args, "center", None):
        return parse_center_flag(args.center, d)
    if "center" in doc:
        return load_center(doc["center"], d)
    return load_center(None, d)


def _cmd_mld(doc, kind, args):
    if kind == "resolution_data":
        data = load_resolution_data(doc["resolution_data"])
        if "pair" not in doc:
            raise InputError("mld on resolution data needs a 'pair' section")
        pair = load_pair(doc["pair"])
        res = mld_at_generic_point(data, pair) if args.generic \
            else mld_on_w(data, pair)
        return {"mld": _enc(res.value),
                "witness_divisor": res.witness_divisor}, EXIT_OK
    if kind == "monomial_pair":
        pair = load_monomial_pair(doc["monomial_pair"])
        center = _resolve_center(doc, args, pair.d)
        prog = mld_program(pair.ideals, pair.q, center)
        sol = solve_piecewise(prog)
        results = {"mld": _enc(sol.value), "witness_weights": _enc(sol.witness)}
        if sol.negative_direction is not None:
            results["negative_direction"] = _enc(sol.negative_direction)
            results["negative_value"] = _enc(sol.negative_value)
        return results, EXIT_OK
    raise InputError(f"mld does not accept {kind} documents")


def _cmd_mld_check(doc, kind, args):
    if kind != "resolution_data":
        raise InputError("mld-check needs a resolution_data document")
    if args.tau is None:
        raise InputError("mld-check requires --tau")
    data = load_resolution_data(doc["resolution_data"])
    if "pair" not in doc:
        raise InputError("mld-check needs a 'pair' section")
    pair = load_pair(doc["pair"])
    res = mld_bound_check(data, pair, frac(args.tau))
    results = {
        "tau": _enc(frac(args.tau)),
        "verdict": res.verdict,
        "box_m": list(res.box_m),
        "box_e": res.box_e,
    }
    if res.counterexample is not None:
        m_bad, e_bad = res.counterexample
        results["counterexample"] = {"m": list(m_bad), "e": e_bad,
                                     "condition": res.condition}
    return results, EXIT_OK if res.verdict else EXIT_PROPERTY


def _cmd_classify(doc, kind, args):
    if kind != "hypersurface":
        raise InputError("classify needs a hypersurface document")
    h, poly, _ = load_hypersurface(doc["hypersurface"])
    c = classify_hypersurface(h, method=args.method, jet_bound=args.jet_bound,
                              prime=args.primes[0], f=poly, budget=args.budget)
    results = {
        "verdict": c.verdict.value,
        "methods": list(c.methods),
        "newton_mld": _enc(c.mu) if c.mu is not None else None,
        "jets": [{
            "level": r.m, "primes": list(r.primes), "dim": r.dim,
            "expected_dim": r.expected_dim, "sing_dim": r.sing_dim,
            "pure_dimension": r.pure_dimension, "sing_codim": r.sing_codim,
        } for r in c.jets],
    }
    if c.jets_excluded is not None:
        results["jets_excluded"] = c.jets_excluded
    return results, EXIT_OK


def _cmd_count_jets(doc, kind, args):
    if kind != "hypersurface":
        raise InputError("count-jets needs a hypersurface document")
    h, poly, variables = load_hypersurface(doc["hypersurface"])
    query = load_query(doc.get("query"), h.d, variables)
    table = []
    for p in args.primes:
        for level in range(args.jet_bound + 1):
            system = jet_equations(poly.reduce_mod(p), level)
            count = count_jet_points(system, p, query, budget=args.budget)
            table.append([p, level, count])
    return {"counts": table}, EXIT_OK


def _cmd_lift(doc, kind, args):
    if kind != "hypersurface":
        raise InputError("lift needs a hypersurface document with an 'arc'")
    if "arc" not in doc:
        raise InputError("lift needs an 'arc' section")
    if args.target is None:
        raise InputError("lift requires --target")
    h, poly, _ = load_hypersurface(doc["hypersurface"])
    arc, e = load_arc(doc["arc"])
    lifted = newton_lift(poly, arc, e, args.target)
    rows = [[str(c) for c in coord] for coord in lifted.series]
    return {"arc_coefficients": rows,
            "order": lifted.order,
            "residual_order_at_least": args.target + 1}, EXIT_OK


def _cmd_check_ioa(doc, kind, args):
    if kind != "adjunction_case":
        raise InputError("check-ioa needs an adjunction_case document")
    case = load_adjunction_case(doc["adjunction_case"])
    res = check_inversion_of_adjunction(case)
    lc_agrees = (res.lhs >= 0) == (res.rhs >= 0)
    results = {"lhs": _enc(res.lhs), "rhs": _enc(res.rhs),
               "equal": res.equal, "lc_adjunction_agrees": lc_agrees}
    return results, EXIT_OK if res.equal else EXIT_PROPERTY


def _cmd_check_semicontinuity(doc, kind, args):
    if kind != "semicontinuity_case":
        raise InputError("check-semicontinuity needs a semicontinuity_case "
                         "document")
    case = load_semicontinuity_case(doc["semicontinuity_case"])
    res = check_semicontinuity(case)
    results = {"mld_v": _enc(res.mld_v), "mld_w": _enc(res.mld_w),
               "codim_vw": res.codim, "holds": res.holds}
    return results, EXIT_OK if res.holds else EXIT_PROPERTY


_HANDLERS = {
    "contact-codim": _cmd_contact_codim,
    "mld": _cmd_mld,
    "mld-check": _cmd_mld_check,
    "classify": _cmd_classify,
    "count-jets": _cmd_count_jets,
    "lift": _cmd_lift,
    "check-ioa": _cmd_check_ioa,
    "check-semicontinuity": _cmd_check_semicontinuity,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arclocus",
        description="Exact contact-locus codimensions and minimal log "
                    "discrepancies, with a finite-field jet oracle.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _HANDLERS:
        p = sub.add_parser(name)
        p.add_argument("input", help="path to the JSON input document")
        p.add_argument("--format", choices=["json", "md"], default="json")
        p.add_argument("--prime", dest="primes", type=int, action="append",
                       help="prime for counting (repeatable; default 3)")
        p.add_argument("--jet-bound", dest="jet_bound", type=int, default=3)
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        p.add_argument("--center", default=None,
                       help="origin | all | subspace:j1,j2,...")
        p.add_argument("--tau", default=None, help="threshold a/b")
        if name == "classify":
            p.add_argument("--method", choices=["newton", "jets", "both"],
                           default="both")
        if name == "lift":
            p.add_argument("--target", type=int, default=None)
        if name == "mld":
            p.add_argument("--generic", action="store_true",
                           help="generic-point variant on resolution data")
    return parser


def run(argv) -> tuple[int, str]:
    """Dispatch and return (exit code, rendered report or error text)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.primes:
        args.primes = [3]
    try:
        doc = _load_document(args.input)
        kind = validate_document(doc)
        results, code = _HANDLERS[args.command](doc, kind, args)
    except (InputError, LiftingObstructionError) as exc:
        return EXIT_INPUT, f"error: {exc}\n"
    except BudgetError as exc:
        return EXIT_BUDGET, f"error: {exc}\n"
    except DisagreementError as exc:
        return EXIT_PROPERTY, f"error: {exc}\n"
    params = {
        "input_kind": kind,
        "primes": args.primes,
        "jet_bound": args.jet_bound,
        "budget": args.budget,
    }
    for extra in ("center", "tau", "method", "target", "generic"):
        value = getattr(args, extra, None)
        if value not in (None, False):
            params[extra] = value
    report = {"command": args.command, "parameters": params, "results": results}
    return code, _render(report, args.format)


def main(argv=None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    # Reports (including failed property checks) go to stdout; error
    # diagnostics go to stderr.
    stream = sys.stderr if code in (EXIT_INPUT, EXIT_BUDGET) else sys.stdout
    stream.write(text)
    return code


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
