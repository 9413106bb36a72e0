"""Command-line surface: parameter checks, verdicts, scans, oracle runs.

All machine output is JSON with exact "p/q" rational strings; decimal
renderings appear only in an advisory block.  Exit codes: 0 for a
certified verdict (onto or not-onto), 2 for an uncertified verdict,
64 usage error, 65 invalid parameters, 74 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .exact import decimal_str, format_rational, parse_rational
from .ifs import Params, validate_params
from .intervals import BinaryOp, Interval
from .oracle import DepthLimit, enumerate_endpoints, gap_search, outer_cover, pairwise_density, restriction_note
from .regions import (
    FIGURE_PREDICATES,
    CSV_PREDICATES,
    GridSpec,
    check_implication,
    classify_point,
    counterexamples_csv,
    render_map,
    resolve_threads,
    scan_grid,
)
from .theorems import (
    Status,
    corollary_report,
    verify_diff,
    verify_div,
    verify_sqrtsum,
    verify_sum,
    verify_sum_digit_ifs,
)

EX_OK = 0
EX_UNCERTIFIED = 2
EX_USAGE = 64
EX_PARAMS = 65
EX_IO = 74


def _emit(payload: dict, path: str | None = None) -> int:
    text = json.dumps(payload, indent=2) + "\n"
    sys.stdout.write(text)
    if path:
        try:
            with open(path, "w") as fh:
                fh.write(text)
        except OSError as exc:
            sys.stderr.write(f"cannot write {path}: {exc}\n")
            return EX_IO
    return EX_OK


def _approx_block(lam: Fraction, c: Fraction) -> dict:
    return {
        "lambda": decimal_str(lam),
        "c": decimal_str(c),
        "note": "decimal renderings are advisory; rational fields are authoritative",
    }


def _params_or_none(args) -> tuple[Params | None, list[str]]:
    check = validate_params(args.lam, args.c)
    return check.params, list(check.violations)


def cmd_check_params(args) -> int:
    classification = classify_point(args.lam, args.c)
    check = validate_params(args.lam, args.c)
    payload = {
        "lambda": format_rational(args.lam),
        "c": format_rational(args.c),
        "valid": check.ok,
        "violations": list(check.violations),
        "classification": classification.to_json(),
        "approx": _approx_block(args.lam, args.c),
    }
    _emit(payload)
    return EX_OK if check.ok else EX_PARAMS


_VERIFIERS = {
    "sum": verify_sum,
    "sum-digit": verify_sum_digit_ifs,
    "diff": verify_diff,
    "div": verify_div,
    "sqrtsum": verify_sqrtsum,
}


def cmd_verify(args) -> int:
    params, violations = _params_or_none(args)
    if params is None:
        _emit(
            {
                "error": "invalid parameters",
                "violations": violations,
                "lambda": format_rational(args.lam),
                "c": format_rational(args.c),
            },
            args.json,
        )
        return EX_PARAMS
    if args.claim == "corollary":
        report = corollary_report(params)
        payload = report.to_json()
        payload["approx"] = _approx_block(params.lam, params.c)
        rc = _emit(payload, args.json)
        if rc:
            return rc
        return EX_OK if report.all_supported else EX_UNCERTIFIED
    verdict = _VERIFIERS[args.claim](params)
    payload = verdict.to_json()
    payload["approx"] = _approx_block(params.lam, params.c)
    rc = _emit(payload, args.json)
    if rc:
        return rc
    if verdict.status in (Status.CERTIFIED_ONTO, Status.CERTIFIED_NOT_ONTO):
        return EX_OK
    return EX_UNCERTIFIED


def cmd_scan(args) -> int:
    spec = GridSpec(args.lmin, args.lmax, args.cmin, args.cmax, args.nx, args.ny)
    m = scan_grid(spec, threads=args.threads)
    predicates = CSV_PREDICATES if args.figure is None else FIGURE_PREDICATES[args.figure]
    try:
        files = render_map(m, args.out, args.format, predicates)
    except OSError as exc:
        sys.stderr.write(f"cannot write {args.out}: {exc}\n")
        return EX_IO
    sys.stdout.write(json.dumps({"written": files}, indent=2) + "\n")
    return EX_OK


def cmd_implication(args) -> int:
    spec = GridSpec(args.lmin, args.lmax, args.cmin, args.cmax, args.nx, args.ny)
    rows = check_implication(args.frm, args.to, spec, threads=args.threads)
    text = counterexamples_csv(rows)
    sys.stdout.write(text)
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            sys.stderr.write(f"cannot write {args.out}: {exc}\n")
            return EX_IO
    return EX_OK if not rows else 1


def _parse_window(text: str) -> Interval:
    try:
        a, b = text.split(",")
        return Interval(parse_rational(a), parse_rational(b))
    except (ValueError, TypeError) as exc:
        raise ValueError(f"bad window {text!r}: {exc}") from exc


def cmd_oracle(args) -> int:
    params, violations = _params_or_none(args)
    if params is None:
        _emit({"error": "invalid parameters", "violations": violations})
        return EX_PARAMS
    op = BinaryOp.from_name(args.op)
    payload = {
        "op": op.value,
        "lambda": format_rational(params.lam),
        "c": format_rational(params.c),
        "depth": args.depth,
    }
    try:
        cover = outer_cover(op, params, args.depth)
        payload["cover"] = cover.to_payload()
        payload["restriction_note"] = restriction_note(op, params, args.depth)
        if args.window is not None:
            window = _parse_window(args.window)
            payload["window"] = window.to_payload()
            payload["gaps"] = [g.to_payload() for g in gap_search(op, params, args.depth, window)]
        if args.eps is not None:
            if args.window is None and op is BinaryOp.DIV:
                sys.stderr.write("div density needs an explicit --window\n")
                return EX_USAGE
            target = (
                _parse_window(args.window)
                if args.window is not None
                else _default_target(op)
            )
            pts = enumerate_endpoints(params, min(args.depth, 10))
            density = pairwise_density(op, pts, target, args.eps)
            payload["density"] = density.to_json()
            payload["density_eps"] = format_rational(args.eps)
    except DepthLimit as exc:
        sys.stderr.write(f"{exc}\n")
        return EX_USAGE
    payload["approx"] = _approx_block(params.lam, params.c)
    return _emit(payload, args.json)


def _default_target(op: BinaryOp) -> Interval:
    if op is BinaryOp.ADD:
        return Interval(Fraction(0), Fraction(2))
    if op is BinaryOp.SUB:
        return Interval(Fraction(-1), Fraction(1))
    if op is BinaryOp.MUL:
        return Interval(Fraction(0), Fraction(1))
    if op is BinaryOp.SQRT_SUM:
        return Interval(Fraction(0), Fraction(2))
    raise AssertionError(op)


def cmd_gap_search(args) -> int:
    params, violations = _params_or_none(args)
    if params is None:
        _emit({"error": "invalid parameters", "violations": violations})
        return EX_PARAMS
    op = BinaryOp.from_name(args.op)
    window = _parse_window(args.window)
    try:
        gaps = gap_search(op, params, args.depth, window)
    except DepthLimit as exc:
        sys.stderr.write(f"{exc}\n")
        return EX_USAGE
    payload = {
        "op": op.value,
        "lambda": format_rational(params.lam),
        "c": format_rational(params.c),
        "depth": args.depth,
        "window": window.to_payload(),
        "gaps": [g.to_payload() for g in gaps],
        "restriction_note": restriction_note(op, params, args.depth),
        "approx": _approx_block(params.lam, params.c),
    }
    return _emit(payload, args.json)


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _add_param_args(sub):
    sub.add_argument("--lambda", dest="lam", type=_rational, required=True)
    sub.add_argument("--c", dest="c", type=_rational, required=True)


def _add_grid_args(sub, default_n=None):
    sub.add_argument("--nx", type=int, required=default_n is None, default=default_n)
    sub.add_argument("--ny", type=int, required=default_n is None, default=default_n)
    sub.add_argument("--lmin", type=_rational, default=Fraction(0))
    sub.add_argument("--lmax", type=_rational, default=Fraction(1, 2))
    sub.add_argument("--cmin", type=_rational, default=Fraction(0))
    sub.add_argument("--cmax", type=_rational, default=Fraction(1))
    sub.add_argument("--threads", type=int, default=None, help="worker count (default: AA_THREADS or all cores)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ifsarith",
        description="exact arithmetic certificates for an overlapping self-similar set",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check-params", help="feasibility and region classification")
    _add_param_args(s)
    s.set_defaults(func=cmd_check_params)

    s = sub.add_parser("verify", help="certify one of the set identities")
    s.add_argument(
        "--claim",
        required=True,
        choices=["sum", "sum-digit", "diff", "div", "sqrtsum", "corollary"],
    )
    _add_param_args(s)
    s.add_argument("--json", default=None, help="also write the verdict to this file")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("scan", help="classify a rational grid and render it")
    _add_grid_args(s)
    s.add_argument("--out", required=True)
    s.add_argument("--format", required=True, choices=["svg", "pgm", "csv"])
    s.add_argument("--figure", type=int, choices=sorted(FIGURE_PREDICATES), default=None,
                   help="color by this figure's predicate subset")
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("implication", help="counterexamples to 'from implies to'")
    s.add_argument("--from", dest="frm", required=True)
    s.add_argument("--to", dest="to", required=True)
    _add_grid_args(s)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_implication)

    s = sub.add_parser("oracle", help="outer covers, density checks")
    s.add_argument("--op", required=True, choices=[op.value for op in BinaryOp])
    _add_param_args(s)
    s.add_argument("--depth", type=int, required=True)
    s.add_argument("--window", default=None, help="a,b (exact rationals)")
    s.add_argument("--eps", type=_rational, default=None)
    s.add_argument("--json", default=None)
    s.add_argument("--threads", type=int, default=None)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("gap-search", help="certified gaps of an operation image")
    s.add_argument("--op", required=True, choices=[op.value for op in BinaryOp])
    _add_param_args(s)
    s.add_argument("--depth", type=int, required=True)
    s.add_argument("--window", required=True, help="a,b (exact rationals)")
    s.add_argument("--json", default=None)
    s.set_defaults(func=cmd_gap_search)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage problems; remap per our contract, but
        # let --help/--version exit 0 untouched
        if exc.code not in (0, None):
            return EX_USAGE
        raise
    if hasattr(args, "threads"):
        args.threads = resolve_threads(args.threads)
    try:
        return args.func(args)
    except ValueError as exc:
        sys.stderr.write(f"{exc}\n")
        return EX_USAGE


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
