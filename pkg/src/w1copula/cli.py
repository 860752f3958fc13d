"""Command-line interface.

    w1copula w1 normal:0,1 normal:3,1 --method auto
    w1copula integrand normal:15,1 uniform:12,16 --grid 401 > curves.csv
    w1copula certify normal:15,1 uniform:12,16 --n 100000 --seed 7
    w1copula check-copula gaussian:0.8 --grid 41

Exit codes: 0 success, 2 bad arguments or spec strings, 3 numerical failure,
4 failed certificate or axiom check.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .copulas import FIGURE_RHOS, M, W, CopulaSpec, _eval as _copula_values, gaussian, parse_copula, verify_copula_axioms
from .distributions import Distribution, Empirical, parse_distribution
from .errors import ConvergenceError, DomainError, IntegrandError, NonFiniteValueError, SpecError
from .montecarlo import theorem_certificate
from .quadrature import QuadConfig
from .wasserstein import w1_auto, w1_cdf_area, w1_empirical_sorted, w1_quantile

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_FAILED = 4

CURVE_TAIL = 1e-6
DEFAULT_COPULAS = (M, W) + tuple(gaussian(r) for r in FIGURE_RHOS)


class UsageError(Exception):
    pass


def parse_spec(text: str) -> Union[Distribution, CopulaSpec]:
    """Parse a distribution spec (``normal:15,1``) or a copula spec (``gaussian:0.64``)."""
    family = text.partition(":")[0]
    if family in ("m", "w", "pi", "gaussian"):
        return parse_copula(text)
    return parse_distribution(text)


@dataclass(frozen=True)
class IntegrandCurve:
    t_grid: np.ndarray
    values: np.ndarray
    copula: CopulaSpec
    area: float


def trapezoid(t: np.ndarray, v: np.ndarray) -> float:
    return math.fsum(0.5 * (v[1:] + v[:-1]) * np.diff(t))


def integrand_curve(x: Distribution, y: Distribution, c: CopulaSpec, t_grid) -> IntegrandCurve:
    """Sample Fx(t) + Fy(t) - 2 C(Fx(t), Fy(t)) on ``t_grid``; area by the trapezoid rule."""
    t = np.asarray(t_grid, dtype=float)
    fx, fy = x.cdf(t), y.cdf(t)
    values = fx + fy - 2.0 * _copula_values(c, fx, fy)
    return IntegrandCurve(t, values, c, trapezoid(t, values))


def default_t_range(x: Distribution, y: Distribution) -> tuple[float, float]:
    lo = min(x.quantile(CURVE_TAIL), y.quantile(CURVE_TAIL))
    hi = max(x.isf(CURVE_TAIL), y.isf(CURVE_TAIL))
    return lo, hi


def _distribution(text: str) -> Distribution:
    d = parse_spec(text)
    if not isinstance(d, Distribution):
        raise SpecError("expected a distribution, got a copula", text, 0)
    return d


def _copula_list(text: str) -> list[CopulaSpec]:
    out = []
    pos = 0
    for tok in text.split(","):
        # gaussian:RHO has no comma, so a plain split is unambiguous
        try:
            out.append(parse_copula(tok))
        except SpecError as exc:
            raise SpecError(str(exc).split(" (token")[0], tok, pos + exc.position) from None
        pos += len(tok) + 1
    return out


def _config(args) -> QuadConfig:
    try:
        return QuadConfig(abs_tol=args.abs_tol, rel_tol=args.rel_tol, tail_eps=args.tail_eps)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _emit_json(obj, out):
    out.write(json.dumps(obj, indent=2) + "\n")


def cmd_w1(args, out) -> int:
    x, y = _distribution(args.x), _distribution(args.y)
    cfg = _config(args)
    if args.method == "sorted":
        if not (isinstance(x, Empirical) and isinstance(y, Empirical)):
            raise UsageError("--method sorted needs two empirical samples")
        if x.n != y.n:
            raise UsageError(f"--method sorted needs equal sample sizes ({x.n} vs {y.n})")
        res = w1_empirical_sorted(x.samples, y.samples)
    else:
        route = {"auto": w1_auto, "quantile": w1_quantile, "cdf": w1_cdf_area}[args.method]
        res = route(x, y, cfg)
    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["value", "method", "error_estimate", "fast_path"])
        w.writerow([repr(res.value), res.method, repr(res.error_estimate), str(res.fast_path).lower()])
    else:
        _emit_json(res.to_dict(), out)
    return EXIT_OK


def cmd_integrand(args, out) -> int:
    x, y = _distribution(args.x), _distribution(args.y)
    copulas = _copula_list(args.copulas) if args.copulas else list(DEFAULT_COPULAS)
    if args.grid < 2:
        raise UsageError("--grid must be >= 2")
    lo, hi = default_t_range(x, y)
    lo = lo if args.t_lo is None else args.t_lo
    hi = hi if args.t_hi is None else args.t_hi
    if not lo < hi:
        raise UsageError(f"need t_lo < t_hi, got {lo} >= {hi}")
    t = np.linspace(lo, hi, args.grid)
    curves = [integrand_curve(x, y, c, t) for c in copulas]

    if args.format == "json":
        _emit_json(
            {
                "x": str(x),
                "y": str(y),
                "t": t.tolist(),
                "curves": [{"copula": str(cv.copula), "values": cv.values.tolist(), "area": cv.area} for cv in curves],
            },
            out,
        )
        return EXIT_OK
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["t", "copula", "value"])
    for cv in curves:
        label = str(cv.copula)
        for ti, vi in zip(cv.t_grid, cv.values):
            w.writerow([repr(float(ti)), label, repr(float(vi))])
    for cv in curves:
        w.writerow(["#area", str(cv.copula), repr(cv.area)])
    return EXIT_OK


def cmd_certify(args, out) -> int:
    x, y = _distribution(args.x), _distribution(args.y)
    if args.n < 1000:
        raise UsageError("--n must be >= 1000")
    rhos = FIGURE_RHOS if args.rhos is None else tuple(_floats(args.rhos))
    cert = theorem_certificate(x, y, rhos, args.n, args.seed)
    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["copula", "mean", "std_error", "n", "seed"])
        for label, e in cert.estimates.items():
            w.writerow([label, repr(e.mean), repr(e.std_error), e.n, e.seed])
        w.writerow(["#passed", str(cert.passed).lower(), "", "", ""])
    else:
        _emit_json(cert.to_dict(), out)
    return EXIT_OK if cert.passed else EXIT_FAILED


def cmd_check_copula(args, out) -> int:
    c = parse_copula(args.copula)
    if args.grid < 2:
        raise UsageError("--grid must be >= 2")
    report = verify_copula_axioms(c, args.grid)
    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["axiom", "holds", "violation"])
        for name in ("grounded", "margins", "two_increasing", "frechet"):
            w.writerow([name, str(getattr(report, name)).lower(), repr(report.violations[name])])
    else:
        _emit_json(report.to_dict(), out)
    return EXIT_OK if report.passed else EXIT_FAILED


def _floats(text: str) -> list[float]:
    try:
        vals = [float(tok) for tok in text.split(",")]
    except ValueError:
        raise UsageError(f"not a comma-separated list of numbers: {text!r}") from None
    if any(not -1.0 <= v <= 1.0 for v in vals):
        raise UsageError("every rho must lie in [-1, 1]")
    return vals


def _add_format(p, default):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", dest="format", action="store_const", const="json", help="JSON output")
    g.add_argument("--csv", dest="format", action="store_const", const="csv", help="CSV output")
    p.set_defaults(format=default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="w1copula",
        description="1-Wasserstein distances between univariate laws, via quantiles, CDF areas and copulas.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("w1", help="distance between two distributions")
    p.add_argument("x", help="e.g. normal:15,1, uniform:12,16, exp:2, empirical:@file.csv")
    p.add_argument("y")
    p.add_argument("--method", choices=("auto", "quantile", "cdf", "sorted"), default="auto")
    p.add_argument("--abs-tol", type=float, default=QuadConfig.abs_tol)
    p.add_argument("--rel-tol", type=float, default=QuadConfig.rel_tol)
    p.add_argument("--tail-eps", type=float, default=QuadConfig.tail_eps)
    _add_format(p, "json")
    p.set_defaults(func=cmd_w1)

    p = sub.add_parser("integrand", help="sample Fx + Fy - 2C(Fx, Fy) for several copulas")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--copulas", help="comma-separated copula specs (default: m, w and the reference gaussian set)")
    p.add_argument("--grid", type=int, default=401)
    p.add_argument("--t-lo", type=float)
    p.add_argument("--t-hi", type=float)
    _add_format(p, "csv")
    p.set_defaults(func=cmd_integrand)

    p = sub.add_parser("certify", help="Monte Carlo check that M minimizes and W maximizes E_C|X-Y|")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--rhos", help="comma-separated gaussian correlations (default: the reference set)")
    _add_format(p, "json")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("check-copula", help="verify copula axioms on a grid")
    p.add_argument("copula", help="m, w, pi or gaussian:RHO")
    p.add_argument("--grid", type=int, default=21)
    _add_format(p, "json")
    p.set_defaults(func=cmd_check_copula)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    buf = io.StringIO()
    try:
        code = args.func(args, buf)
    except (SpecError, UsageError) as exc:
        print(f"w1copula: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, IntegrandError, NonFiniteValueError, DomainError, FloatingPointError) as exc:
        print(f"w1copula: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    out.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
