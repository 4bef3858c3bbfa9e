"""Command-line front end.

    mzvsum verify {prop1|cor2|prop3|sum-formula|gf} ...
    mzvsum eval {mzv|hurwitz|multiple-hurwitz|weighted|prop3-rhs|integral} ...
    mzvsum oracle {integral|change-of-vars} ...
    mzvsum scan --config grid.json

Global flags (accepted before or after the subcommand): ``--digits``,
``--tol``, ``--json``, ``--jobs``.  ``MZV_DIGITS`` sets the default
precision.  Exit status: 0 pass, 1 fail, 2 error (invalid input or a
numerical breakdown).
"""
from __future__ import annotations

import argparse
import json
import sys

from mpmath import mpf

from . import __version__
from .errors import MzvError
from .hpcore import PrecisionContext, SeriesValue, format_complex, format_real, hurwitz_zeta, to_hp
from .identities import (
    DEFAULT_TOL,
    SUM_FORMULA_TOL,
    check_cor2,
    check_gf_prop1,
    check_gf_prop3,
    check_prop1,
    check_prop3,
    check_sum_formula,
)
from .multiseries import WeightVariant, lhs_double_pole, multiple_hurwitz_zeta, weighted_multiple_series
from .quadrature import (
    DEFAULT_LEVEL,
    QUAD_TOL,
    check_change_of_variables,
    iterated_integral_prop1,
    iterated_integral_prop3,
)
from .report import IdentityReport, write_csv, write_jsonl
from .scan import ScanConfig, read_config, run_tasks
from .taylor import pochhammer_ratio_series, prop3_rhs


class UsageError(MzvError, ValueError):
    """A required option is missing or inconsistent."""


def _composition(text: str) -> tuple:
    try:
        parts = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated positive integers, got {text!r}") from None
    if not parts or any(p < 1 for p in parts):
        raise argparse.ArgumentTypeError(f"expected comma-separated positive integers, got {text!r}")
    return parts


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # sub-parsers use SUPPRESS so a flag given before the subcommand is not reset
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    g = parser.add_argument_group("global options")
    g.add_argument("--digits", type=int, default=d(None),
                   help="significant digits (>= 20; default $MZV_DIGITS or 30)")
    g.add_argument("--tol", type=float, default=d(None), help="pass tolerance (default depends on the check)")
    g.add_argument("--json", action="store_true", default=d(False), help="also print machine-readable JSON")
    g.add_argument("--jobs", type=int, default=d(1), help="worker processes for scans")


def _sub(subparsers, name, help):
    p = subparsers.add_parser(name, help=help, description=help)
    _global_flags(p, suppress=True)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mzvsum",
        description="High-precision checks of sum formulas for multiple (Hurwitz) zeta values.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_flags(parser, suppress=False)
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    verify = commands.add_parser("verify", help="check one identity at one parameter point")
    vsub = verify.add_subparsers(dest="target", required=True, metavar="IDENTITY")
    p = _sub(vsub, "prop1", "double-pole series vs weighted multiple series")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    for name, help in (("cor2", "zeta(k; alpha) vs weighted multiple series"),
                       ("prop3", "multiple Hurwitz sum vs Taylor-coefficient series")):
        p = _sub(vsub, name, help)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--alpha", required=True)
    p = _sub(vsub, "sum-formula", "sum of multiple zeta values of fixed weight and depth vs zeta(k)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p = _sub(vsub, "gf", "generating-function identity at a numeric X")
    p.add_argument("--which", choices=("prop1", "prop3"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", help="required for --which prop1")
    p.add_argument("--X", required=True)

    ev = commands.add_parser("eval", help="evaluate one quantity")
    esub = ev.add_subparsers(dest="target", required=True, metavar="QUANTITY")
    p = _sub(esub, "mzv", "multiple zeta value zeta(s1, ..., sn), sum over 0 < m1 < ... < mn")
    p.add_argument("--s", type=_composition, required=True, help="e.g. 1,2")
    p = _sub(esub, "hurwitz", "Hurwitz zeta zeta(s; alpha)")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p = _sub(esub, "multiple-hurwitz", "multiple Hurwitz zeta, sum over 0 <= m1 < ... < mn")
    p.add_argument("--s", type=_composition, required=True)
    p.add_argument("--alpha", required=True)
    p = _sub(esub, "weighted", "Pochhammer-weighted multiple series")
    p.add_argument("--k", type=_composition, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--variant", choices=[v.value for v in WeightVariant], default="prop1")
    p.add_argument("--X", default="0")
    p = _sub(esub, "prop3-rhs", "sum_l (l+1)^-n times the (k-n-1)-th Taylor coefficient of the Pochhammer ratio")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p = _sub(esub, "integral", "simplex integral by tanh-sinh quadrature (binary64)")
    _integral_args(p)

    orc = commands.add_parser("oracle", help="quadrature cross-checks")
    osub = orc.add_subparsers(dest="target", required=True, metavar="ORACLE")
    p = _sub(osub, "integral", "simplex integral vs its series value")
    _integral_args(p)
    p = _sub(osub, "change-of-vars", "simplex integral vs its image under t_i -> 1 - t_{n-i}")
    p.add_argument("--which", choices=("eq4", "eq6"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", help="required for --which eq4")
    p.add_argument("--X", default="0")
    p.add_argument("--level", type=int, default=DEFAULT_LEVEL)

    p = _sub(commands, "scan", "run a parameter grid from a JSON config")
    p.add_argument("--config", required=True, help="path to the JSON grid configuration")
    p.add_argument("--output", help="report file (overrides the config; default stdout)")
    p.add_argument("--format", choices=("jsonl", "csv"), help="report format (overrides the config)")
    p.add_argument("--timings", action="store_true",
                   help="include wall_time in reports (makes output run-dependent)")
    return parser


def _integral_args(p):
    p.add_argument("--which", choices=("prop1", "prop3"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", help="required for --which prop1")
    p.add_argument("--X", default="0")
    p.add_argument("--level", type=int, default=DEFAULT_LEVEL)
    p.add_argument("--form", choices=("original", "reflected"), default="original")


def _need_beta(args):
    if args.beta is None:
        raise UsageError(f"--beta is required with --which {args.which}")


def _print_report(report: IdentityReport, as_json: bool) -> None:
    print(report.summary())
    if as_json:
        print(report.to_json(timings=True))


def _exit_code(report: IdentityReport) -> int:
    if report.reason is not None:
        return 2
    return 0 if report.passed else 1


def cmd_verify(args, ctx: PrecisionContext) -> int:
    t = args.target
    tol = args.tol
    if t == "prop1":
        r = check_prop1(args.n, args.m, args.alpha, args.beta, tol or DEFAULT_TOL, ctx)
    elif t == "cor2":
        r = check_cor2(args.k, args.n, args.alpha, tol or DEFAULT_TOL, ctx)
    elif t == "prop3":
        r = check_prop3(args.k, args.n, args.alpha, tol or DEFAULT_TOL, ctx)
    elif t == "sum-formula":
        r = check_sum_formula(args.k, args.n, tol or SUM_FORMULA_TOL, ctx)
    elif args.which == "prop1":
        _need_beta(args)
        r = check_gf_prop1(args.n, args.alpha, args.beta, args.X, tol or DEFAULT_TOL, ctx)
    else:
        r = check_gf_prop3(args.n, args.alpha, args.X, tol or DEFAULT_TOL, ctx)
    _print_report(r, args.json)
    return _exit_code(r)


def _print_value(sv: SeriesValue, ctx: PrecisionContext, as_json: bool, **extra) -> None:
    fields = {
        "value": format_complex(sv.value, ctx.digits),
        "err": format_real(sv.err, 6),
        "cutoff": sv.cutoff,
        "method": sv.method.value,
    }
    fields.update(extra)
    for k, v in fields.items():
        print(f"{k}: {v}")
    if as_json:
        print(json.dumps(fields))


def _integral(args, ctx):
    if args.which == "prop1":
        _need_beta(args)
        return iterated_integral_prop1(args.n, args.alpha, args.beta, args.X, args.level, ctx, form=args.form)
    return iterated_integral_prop3(args.n, args.alpha, args.X, args.level, ctx, form=args.form)


def cmd_eval(args, ctx: PrecisionContext) -> int:
    t = args.target
    if t == "mzv":
        sv = multiple_hurwitz_zeta(args.s, 1, ctx=ctx)
    elif t == "hurwitz":
        sv = hurwitz_zeta(args.s, args.alpha, ctx)
    elif t == "multiple-hurwitz":
        sv = multiple_hurwitz_zeta(args.s, args.alpha, ctx=ctx)
    elif t == "weighted":
        sv = weighted_multiple_series(args.k, args.alpha, args.beta, args.variant, args.X, ctx=ctx)
    elif t == "prop3-rhs":
        sv = prop3_rhs(args.k, args.n, args.alpha, ctx=ctx)
    else:
        sv = _integral(args, ctx).as_series_value()
    _print_value(sv, ctx, args.json)
    return 0


def _series_for_integral(args, ctx) -> SeriesValue:
    """Series value that the simplex integral represents."""
    if args.which == "prop3":
        return pochhammer_ratio_series(args.n, args.alpha, args.X, ctx=ctx)
    with ctx.working():
        shifted = to_hp(args.beta) - to_hp(args.X)
    return lhs_double_pole(args.n, 1, args.alpha, shifted, ctx)


def cmd_oracle(args, ctx: PrecisionContext) -> int:
    tol = args.tol or QUAD_TOL
    if args.target == "change-of-vars":
        if args.which == "eq4":
            _need_beta(args)
        r = check_change_of_variables(args.which, args.n, args.alpha, args.beta, args.X, args.level, ctx, tol)
        _print_report(r, args.json)
        return _exit_code(r)
    quad = _integral(args, ctx).as_series_value()
    series = _series_for_integral(args, ctx)
    with ctx.working():
        residual = abs(quad.value - series.value)
        passed = bool(residual <= max(mpf(tol), 10 * (quad.err + series.err)))
    _print_value(quad, ctx, False, series=format_complex(series.value, ctx.digits),
                 residual=format_real(residual, 3), tol=tol, result="PASS" if passed else "FAIL")
    if args.json:
        print(json.dumps({
            "integral": format_complex(quad.value, ctx.digits),
            "err_integral": format_real(quad.err, 6),
            "series": format_complex(series.value, ctx.digits),
            "err_series": format_real(series.err, 6),
            "residual": format_real(residual, 6),
            "tol": tol,
            "pass": passed,
        }))
    return 0 if passed else 1


def cmd_scan(args) -> int:
    config: ScanConfig = read_config(args.config, args.digits)
    if args.tol is not None:
        print("warning: --tol is ignored by scan; set 'tol' in the config", file=sys.stderr)
    reports = run_tasks(config.tasks, max(1, args.jobs))
    fmt = args.format or config.format
    output = args.output or config.output
    writer = write_csv if fmt == "csv" else write_jsonl
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            writer(reports, fh, timings=args.timings)
        summary_stream = sys.stdout
    else:
        writer(reports, sys.stdout, timings=args.timings)
        summary_stream = sys.stderr
    passed = sum(r.passed for r in reports)
    failed = len(reports) - passed
    noun = "check" if len(reports) == 1 else "checks"
    print(f"{len(reports)} {noun}, {passed} passed, {failed} failed", file=summary_stream)
    for r in reports:
        if not r.passed:
            print(r.summary(), file=summary_stream)
    return 0 if failed == 0 else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.jobs < 1:
            raise UsageError(f"--jobs must be >= 1, got {args.jobs}")
        if args.tol is not None and not args.tol > 0:
            raise UsageError(f"--tol must be positive, got {args.tol}")
        if args.command == "scan":
            return cmd_scan(args)
        ctx = PrecisionContext.from_env(args.digits)
        if args.command == "verify":
            return cmd_verify(args, ctx)
        if args.command == "eval":
            return cmd_eval(args, ctx)
        return cmd_oracle(args, ctx)
    except (MzvError, ValueError) as exc:
        print(f"mzvsum: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
