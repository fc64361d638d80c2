"""Command-line front end: ``gentrig {eval,pi,integral,asympt,verify}``.

Exit codes: 0 success, 1 a verification check failed, 2 invalid arguments,
3 an integral did not converge.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from typing import Callable, Iterable, List, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError, PoleError
from .gentrig import cos_pq, make_params, ode_residual, sin_pq, sinc_pq, tan_pq
from .quadrature import DEFAULT_TOL
from .sincint import (
    VerificationReport,
    asymptotic_model,
    ball_inequality_scan,
    bhayo_vuorinen_check,
    check_divergence_constant,
    check_schwarz,
    I_pq,
    kernel_L,
    kernel_L_series,
    limit_I,
    multiple_angle_residual,
    rem2_integral,
    sinc_power_integral_direct,
    sinc_power_integral_transform,
    theorem21_sides,
    wolstenholme,
)
from .sincint.reports import equality_report

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NONCONV = 0, 1, 2, 3

INTEGRAL_COLUMNS = ("p", "q", "r_or_m", "method", "value", "abs_err", "periods", "converged")
DEFAULT_VERIFY_GRID = "1.5,2,2.5,3"


def parse_grid(text: str) -> List[float]:
    """``"1,2,3"`` or geometric ``"start:stop:count"``; a bare number is a one-point grid."""
    text = text.strip()
    if not text:
        raise ValueError("empty grid")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range grid needs start:stop:count, got {text!r}")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if start <= 0 or stop <= 0 or count < 1:
            raise ValueError(f"geometric grid needs positive ends and count >= 1, got {text!r}")
        if count == 1:
            return [start]
        return [float(v) for v in np.geomspace(start, stop, count)]
    return [float(v) for v in text.split(",") if v.strip()]


def _grid_arg(text: str) -> List[float]:
    try:
        return parse_grid(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _default_tol() -> float:
    env = os.environ.get("GENTRIG_TOL")
    if env is None:
        return DEFAULT_TOL
    try:
        value = float(env)
    except ValueError:
        value = -1.0
    if not value > 0:
        raise DomainError(f"GENTRIG_TOL must be a positive number, got {env!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=_grid_arg, default=[2.0], help="p value(s); grid syntax allowed")
    common.add_argument("--q", type=_grid_arg, default=[2.0], help="q value(s); grid syntax allowed")
    common.add_argument("--tol", type=float, default=None, help="absolute tolerance (default $GENTRIG_TOL or 1e-9)")
    common.add_argument("--max-periods", type=int, default=10_000, help="panel budget for oscillatory tails")
    common.add_argument("--format", choices=("csv", "json", "text"), default="text")

    parser = argparse.ArgumentParser(
        prog="gentrig",
        description="Generalised trigonometric functions sin_{p,q} and their sinc integrals.",
        epilog="Grids: comma lists (1.5,2,3) or geometric ranges start:stop:count (100:1600:5).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", parents=[common], help="sin, cos, tan and sinc at given x")
    ev.add_argument("--x", type=_grid_arg, required=True)

    sub.add_parser("pi", parents=[common], help="tabulate pi_{p,q} over the (p, q) grid")

    it = sub.add_parser("integral", parents=[common], help="Dirichlet power integral or I_pq(m)")
    which = it.add_mutually_exclusive_group(required=True)
    which.add_argument("--r", type=_grid_arg, help="integer power r of int_0^inf sinc_pq^r")
    which.add_argument("--m", type=_grid_arg, help="exponent m > 1 of I_pq(m)")
    it.add_argument("--method", choices=("transform", "direct", "both"), default="both")

    asy = sub.add_parser("asympt", parents=[common], help="I_pq(m) against the two-term model")
    asy.add_argument("--m", type=_grid_arg, default=[10.0, 100.0, 1000.0])

    ver = sub.add_parser(
        "verify",
        parents=[common],
        help="run the identity suite",
        description=(
            "Run every identity and inequality check. Lattice checks use (p, q) in "
            f"--grid squared (default {DEFAULT_VERIFY_GRID})."
        ),
    )
    ver.add_argument("--grid", type=_grid_arg, default=parse_grid(DEFAULT_VERIFY_GRID))
    return parser


# ---------------------------------------------------------------- output


def _plain(v):
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, np.ndarray):
        return [_plain(x) for x in v.tolist()]
    if isinstance(v, np.generic):
        return v.item()
    return v


def _emit(rows: Sequence[dict], columns: Sequence[str], fmt: str, out) -> None:
    if fmt == "json":
        json.dump([_plain(r) for r in rows], out, indent=2)
        out.write("\n")
    elif fmt == "csv":
        w = csv.DictWriter(out, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _plain(r.get(k)) for k in columns})
    else:
        for r in rows:
            out.write("  ".join(f"{k}={_fmt(r.get(k))}" for k in columns) + "\n")


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.15g}"
    return str(v)


# ---------------------------------------------------------------- commands


def _pairs(args):
    return [(p, q) for p in args.p for q in args.q]


def _cmd_eval(args, tol, out):
    rows = []
    for p, q in _pairs(args):
        params = make_params(p, q)
        for x in args.x:
            try:
                t = tan_pq(params, x)
            except PoleError:
                t = math.inf
            rows.append(dict(p=p, q=q, x=x, sin=sin_pq(params, x), cos=cos_pq(params, x), tan=t, sinc=sinc_pq(params, x)))
    _emit(rows, ("p", "q", "x", "sin", "cos", "tan", "sinc"), args.format, out)
    return EXIT_OK


def _cmd_pi(args, tol, out):
    rows = [dict(p=p, q=q, pi_pq=make_params(p, q).pi_pq) for p, q in _pairs(args)]
    _emit(rows, ("p", "q", "pi_pq"), args.format, out)
    return EXIT_OK


def _row(p, q, rm, method, res):
    return dict(
        p=p, q=q, r_or_m=rm, method=method, value=res.value, abs_err=res.abs_error_estimate,
        periods=res.periods_used, converged=res.converged,
    )


def _cmd_integral(args, tol, out):
    rows = []
    for p, q in _pairs(args):
        params = make_params(p, q)
        if args.r is not None:
            methods = ("transform", "direct") if args.method == "both" else (args.method,)
            for r in args.r:
                if r != int(r):
                    raise DomainError(f"--r must be integers, got {r}")
                for method in methods:
                    if method == "transform":
                        res = sinc_power_integral_transform(params, int(r), tol)
                    else:
                        res = sinc_power_integral_direct(params, int(r), tol, max_periods=args.max_periods)
                    rows.append(_row(p, q, r, method, res))
        else:
            for m in args.m:
                rows.append(_row(p, q, m, "I_pq", I_pq(params, m, tol, max_periods=args.max_periods)))
    _emit(rows, INTEGRAL_COLUMNS, args.format, out)
    return EXIT_OK


def _cmd_asympt(args, tol, out):
    rows = []
    for p, q in _pairs(args):
        params = make_params(p, q)
        model = asymptotic_model(params)
        lim = limit_I(params)
        for m in args.m:
            res = I_pq(params, m, tol, max_periods=args.max_periods)
            model_val = model.tilde_I(m)
            rows.append(dict(
                p=p, q=q, m=m, I=res.value, tilde_I=model_val, limit=lim,
                residual=res.value - model_val, scaled_residual=m * m * (res.value - model_val),
                abs_err=res.abs_error_estimate,
            ))
    cols = ("p", "q", "m", "I", "tilde_I", "limit", "residual", "scaled_residual", "abs_err")
    _emit(rows, cols, args.format, out)
    return EXIT_OK


def _cmd_verify(args, tol, out):
    reports = run_verification(args.grid, tol, max_periods=args.max_periods)
    rows = [r.to_dict() for r in reports]
    if args.format == "text":
        for r in reports:
            out.write(f"{'PASS' if r.passed else 'FAIL'}  {r.identity_name:<28} "
                      f"lhs={r.lhs:.15g} rhs={r.rhs:.15g} diff={r.abs_diff:.3g} {_short(r.metadata)}\n")
        n_fail = sum(not r.passed for r in reports)
        out.write(f"{len(reports) - n_fail}/{len(reports)} checks passed\n")
    else:
        cols = ("identity_name", "lhs", "rhs", "abs_diff", "tolerance", "passed", "relation")
        _emit(rows, cols, args.format, out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _short(meta):
    keys = [k for k in ("p", "q", "r", "n", "y", "x", "m", "argmax_m") if k in meta]
    return " ".join(f"{k}={meta[k]}" for k in keys)


# ---------------------------------------------------------------- suite


def _failed(name, exc, meta):
    meta = dict(meta, error=str(exc))
    return VerificationReport(name, math.nan, math.nan, math.nan, 0.0, False, "eq", meta)


def run_verification(grid: Iterable[float], tol: float = 1e-7, *, max_periods: int = 10_000) -> List[VerificationReport]:
    """Every identity check, in a fixed order.

    Lattice checks (path agreement, Schwarz, sandwich, ODE residual,
    divergence constant) run over ``grid x grid``.  A check whose integrals
    do not converge is reported as failed rather than aborting the suite.
    """
    grid = [float(g) for g in grid]
    if any(not g > 1 for g in grid):
        raise DomainError("verification grid values must exceed 1")
    reports: List[VerificationReport] = []

    def attempt(name, check, **meta):
        try:
            out = check()
        except ConvergenceError as exc:
            reports.append(_failed(name, exc, meta))
            return
        reports.extend(out if isinstance(out, list) else [out])

    classical = make_params(2.0, 2.0)

    def classical_value(r, v):
        res = sinc_power_integral_transform(classical, r, 0.01 * tol)
        return equality_report("classical_dirichlet", res.value, v, tol, res.abs_error_estimate, r=r)

    for r, v in {1: math.pi / 2, 2: math.pi / 2, 3: 3 * math.pi / 8, 4: math.pi / 3}.items():
        attempt("classical_dirichlet", lambda: classical_value(r, v), r=r)

    for r in range(1, 5):
        for t in np.round(np.arange(0.1, 1.0, 0.1), 10):
            exact = kernel_L(r, t)
            attempt("kernel_series", lambda: equality_report(
                "kernel_series", kernel_L_series(r, t, 1e-13), exact, 1e-9 * abs(exact), r=r, t=float(t)))

    rng = np.random.default_rng(20240101)
    for q in sorted(set(grid) | {1.5, 2.0, 3.0, 5.0}):
        x = rng.uniform(-10.0, 10.0, 100)
        worst = float(np.max(np.abs(multiple_angle_residual(q, x))))
        reports.append(equality_report("multiple_angle_formula", worst, 0.0, 1e-10, q=q))

    def multiple_angle_integral(q):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            lhs, rhs = theorem21_sides(q, 0.01 * tol, max_periods=max_periods)
        rem = rem2_integral(q, 0.01 * tol, max_periods=100 * max_periods)
        err = lhs.abs_error_estimate + rhs.abs_error_estimate + rem.abs_error_estimate
        return [
            equality_report("multiple_angle_integral", lhs.value, rhs.value, tol, err, q=q),
            equality_report("rem2_form", rem.value, lhs.value, tol, err, q=q),
        ]

    for q in (2.0, 3.0, 4.0):
        attempt("multiple_angle_integral", lambda: multiple_angle_integral(q), q=q)

    def paths(params, r):
        a = sinc_power_integral_transform(params, r, 0.01 * tol)
        b = sinc_power_integral_direct(params, r, 0.01 * tol, max_periods=max_periods)
        return equality_report("transform_vs_direct", a.value, b.value, tol,
                               a.abs_error_estimate + b.abs_error_estimate, p=params.p, q=params.q, r=r)

    def schwarz(params):
        sch = check_schwarz(params, tol)
        is_classical = (params.p, params.q) == (2.0, 2.0)
        # equality at the classical pair only, a visible margin elsewhere
        strict = sch.metadata["margin"] > tol
        return VerificationReport("schwarz", sch.lhs, sch.rhs, sch.abs_diff, tol,
                                  sch.passed and (strict != is_classical), "le", sch.metadata)

    def ode_order(params):
        x = 0.4 * params.half_period
        r1, r2 = ode_residual(params, x, 4e-3), ode_residual(params, x, 2e-3)
        return VerificationReport("ode_residual_order", r1 / r2, 4.0, abs(r1 / r2 - 4.0), 0.1,
                                  abs(r1 / r2 - 4.0) <= 0.1, "eq",
                                  {"p": params.p, "q": params.q, "x": x, "residual": r2})

    for p in grid:
        for q in grid:
            params = make_params(p, q)
            for r in range(1, 5):
                attempt("transform_vs_direct", lambda: paths(params, r), p=p, q=q, r=r)
            attempt("schwarz", lambda: schwarz(params), p=p, q=q)
            for y in (0.25, 0.5, 0.9):
                reports.append(bhayo_vuorinen_check(params, y))
            attempt("divergence_constant", lambda: check_divergence_constant(params, max(tol, 1e-9)), p=p, q=q)
            reports.append(ode_order(params))

    ball_grid = [2, 2.5, 3, 5, 10, 50, 200]
    attempt("ball_inequality", lambda: ball_inequality_scan(ball_grid, max(tol, 1e-8)), m_grid=ball_grid)

    def wolstenholme_check(n):
        res = sinc_power_integral_direct(classical, n, 0.01 * tol, max_periods=max_periods)
        return equality_report("wolstenholme", wolstenholme(n), res.value, tol, res.abs_error_estimate, n=n)

    for n in range(1, 13):
        attempt("wolstenholme", lambda: wolstenholme_check(n), n=n)
    return reports


_COMMANDS: dict[str, Callable] = {
    "eval": _cmd_eval,
    "pi": _cmd_pi,
    "integral": _cmd_integral,
    "asympt": _cmd_asympt,
    "verify": _cmd_verify,
}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        tol = _default_tol() if args.tol is None else args.tol
        if not tol > 0:
            raise DomainError("--tol must be positive")
        if args.max_periods < 1:
            raise DomainError("--max-periods must be at least 1")
        if args.command != "verify" and any(v <= 1 for v in args.p + args.q):
            raise DomainError("p and q must exceed 1")
        buf = io.StringIO()
        code = _COMMANDS[args.command](args, tol, buf)
    except DomainError as exc:
        print(f"gentrig: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"gentrig: no convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONV
    out.write(buf.getvalue())
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
