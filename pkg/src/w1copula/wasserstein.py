"""1-Wasserstein distance between univariate laws.

Two quadrature routes compute the same number:

* quantile route: ``∫_0^1 |Qx(u) - Qy(u)| du`` (the comonotone coupling),
* CDF-area route: ``∫ Fx + Fy - 2 min(Fx, Fy) dt``, i.e. the area between CDFs.

``expected_distance`` generalizes the second route to any copula, giving
E_C|X - Y|; the comonotone copula M minimizes it. Exact shortcuts cover
disjoint supports and first-order dominance, where the distance is the
difference of the means.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from .copulas import CopulaSpec, _eval as _copula_values
from .distributions import Distribution, Empirical, Exponential, Normal, Uniform
from .errors import DomainError, IntegrandError
from .quadrature import QuadConfig, integrate_line, integrate_unit

__all__ = [
    "W1Result",
    "DominanceVerdict",
    "w1_quantile",
    "w1_cdf_area",
    "expected_distance",
    "dominance_check",
    "w1_auto",
    "w1_empirical_sorted",
    "brute_force_w1",
]

# Quantile level treated as "the end of the support" for unbounded families.
DEEP_TAIL = 1e-300
# Tail strips are integrated in w = -log(p / eps); beyond this the weight eps*e^-w is negligible.
_TAIL_SPAN = 60.0
_IDENTITY_TOL = 1e-12
_BRUTE_FORCE_MAX = 8


@dataclass(frozen=True)
class W1Result:
    value: float
    method: str
    error_estimate: float
    fast_path: bool

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class DominanceVerdict:
    relation: str  # x_dominates | y_dominates | crossing | equal
    checked_levels: int


# Seed levels for the first subdivision: a coarse uniform grid plus geometric
# steps toward both ends, so narrow tail features (e.g. quantile crossings at
# u ~ 1e-3) are never hidden inside a single Gauss-Kronrod panel.
_GEOM = 10.0 ** -np.arange(1, 13)
_SEED_LEVELS = np.unique(np.concatenate([np.arange(1, 16) / 16, _GEOM, 1.0 - _GEOM[:6]]))


def _quantile_breaks(d: Distribution) -> list[float]:
    if isinstance(d, Empirical):
        return list(np.arange(1, d.n) / d.n)
    return []


def _line_breaks(d: Distribution) -> list[float]:
    if isinstance(d, Empirical):
        return list(d.samples)
    lo, hi, _ = d.support()
    pts = [b for b in (lo, hi) if math.isfinite(b)]
    pts.extend(d._quantile(_SEED_LEVELS[_SEED_LEVELS < 0.5]))
    pts.extend(d._isf(_GEOM))
    pts.extend(d._quantile(_SEED_LEVELS[(_SEED_LEVELS >= 0.5) & (_SEED_LEVELS < 1 - 1e-6)]))
    return pts


def _deep_bounds(d: Distribution) -> tuple[float, float]:
    lo, hi, _ = d.support()
    if not math.isfinite(lo):
        lo = float(d._quantile(np.array([DEEP_TAIL]))[0])
    if not math.isfinite(hi):
        hi = float(d._isf(np.array([DEEP_TAIL]))[0])
    return lo, hi


def _tail_strip(g: Callable[[np.ndarray], np.ndarray], eps: float, cfg: QuadConfig):
    """∫_0^eps g(p) dp via p = eps * exp(-w). Returns (value, error)."""

    def h(w):
        p = eps * np.exp(-w)
        return g(p) * p

    res = integrate_line(h, 0.0, _TAIL_SPAN, cfg, breakpoints=(1.0, 2.0, 4.0, 8.0, 16.0, 32.0))
    p_end = eps * math.exp(-_TAIL_SPAN)
    remainder = abs(float(g(np.array([p_end]))[0])) * p_end
    return res.value, res.error_estimate + remainder


def w1_quantile(x: Distribution, y: Distribution, cfg: QuadConfig = QuadConfig()) -> W1Result:
    """W1 as the integral of |Qx(u) - Qy(u)| over (0, 1).

    The interior [eps, 1 - eps] is integrated adaptively; the two end strips
    are added back through an exponential change of variables so that
    unbounded quantile functions are not truncated.
    """
    eps = cfg.tail_eps
    qx, qy = x._quantile, y._quantile
    breaks = sorted(set(_quantile_breaks(x)) | set(_quantile_breaks(y)) | set(_SEED_LEVELS))
    main = integrate_unit(lambda u: np.abs(qx(u) - qy(u)), cfg, breaks)
    lower, lower_err = _tail_strip(lambda p: np.abs(qx(p) - qy(p)), eps, cfg)
    upper, upper_err = _tail_strip(lambda p: np.abs(x._isf(p) - y._isf(p)), eps, cfg)
    value = math.fsum([lower, main.value, upper])
    err = main.error_estimate + lower_err + upper_err
    return W1Result(value, "quantile", err, False)


def _vallender(
    x: Distribution,
    y: Distribution,
    integrand: Callable[[np.ndarray, np.ndarray], np.ndarray],
    cfg: QuadConfig,
) -> tuple[float, float]:
    """∫ integrand(Fx(t), Fy(t)) dt over the line. Returns (value, error)."""
    eps = cfg.tail_eps
    lo = min(float(x._quantile(np.array([eps]))[0]), float(y._quantile(np.array([eps]))[0]))
    hi = max(float(x._isf(np.array([eps]))[0]), float(y._isf(np.array([eps]))[0]))
    xlo, xhi = _deep_bounds(x)
    ylo, yhi = _deep_bounds(y)
    deep_lo, deep_hi = min(xlo, ylo), max(xhi, yhi)
    lo, hi = max(lo, deep_lo), min(hi, deep_hi)

    def f(t):
        return integrand(x._cdf(t), y._cdf(t))

    breaks = sorted(set(_line_breaks(x)) | set(_line_breaks(y)))
    pieces, errs = [], []
    for a, b in ((deep_lo, lo), (lo, hi), (hi, deep_hi)):
        if b > a:
            res = integrate_line(f, a, b, cfg, breaks)
            pieces.append(res.value)
            errs.append(res.error_estimate)
    return math.fsum(pieces), math.fsum(errs)


def _comonotone_integrand(fx, fy):
    val = fx + fy - 2.0 * np.minimum(fx, fy)
    gap = np.abs(val - np.abs(fx - fy))
    if np.any(gap > _IDENTITY_TOL):
        i = int(np.argmax(gap))
        raise IntegrandError(
            f"comonotone integrand departs from |Fx - Fy| by {gap[i]:.3g}", abscissa=None
        )
    return val


def w1_cdf_area(x: Distribution, y: Distribution, cfg: QuadConfig = QuadConfig()) -> W1Result:
    """W1 as the area between the two CDFs."""
    value, err = _vallender(x, y, _comonotone_integrand, cfg)
    return W1Result(value, "cdf_area", err, False)


def expected_distance(
    x: Distribution, y: Distribution, c: CopulaSpec, cfg: QuadConfig = QuadConfig()
) -> float:
    """E_C|X - Y| = ∫ Fx(t) + Fy(t) - 2 C(Fx(t), Fy(t)) dt for the copula ``c``."""
    if c.effective_kind == "M":
        return _vallender(x, y, _comonotone_integrand, cfg)[0]

    def integrand(fx, fy):
        return fx + fy - 2.0 * _copula_values(c, fx, fy)

    return _vallender(x, y, integrand, cfg)[0]


def _analytic_dominance(x: Distribution, y: Distribution):
    def order(a, b):
        if a == b:
            return "equal"
        return "x_dominates" if a > b else "y_dominates"

    if isinstance(x, Normal) and isinstance(y, Normal):
        if x.sigma != y.sigma:
            return "crossing"
        return order(x.mu, y.mu)
    if isinstance(x, Uniform) and isinstance(y, Uniform):
        if x.b - x.a == y.b - y.a:
            return order(x.a, y.a)
    if isinstance(x, Exponential) and isinstance(y, Exponential):
        # quantiles scale with 1/lambda
        return order(y.lam, x.lam)
    return None


def dominance_check(x: Distribution, y: Distribution, levels: int = 64) -> DominanceVerdict:
    """Decide first-order dominance by comparing quantiles.

    Same-family location shifts (and exponential rates) are decided
    analytically, reported with ``checked_levels=0``. Otherwise quantiles are
    compared on ``levels`` evenly spaced interior levels plus geometric tail
    levels down to 1e-12 at each end. Non-strict dominance with at least one
    strict level counts as dominance.
    """
    if levels < 3:
        raise DomainError(f"levels must be >= 3, got {levels}")
    rel = _analytic_dominance(x, y)
    if rel is not None:
        return DominanceVerdict(rel, 0)

    u = np.arange(1, levels + 1) / (levels + 1)
    tail = 10.0 ** -np.arange(3, 13)
    dx = np.concatenate([x._quantile(tail), x._quantile(u), x._isf(tail)])
    dy = np.concatenate([y._quantile(tail), y._quantile(u), y._isf(tail)])
    diff = dx - dy
    checked = diff.size

    sx, sy = x.support(), y.support()
    x_may = sx.lower >= sy.lower and sx.upper >= sy.upper
    y_may = sy.lower >= sx.lower and sy.upper >= sx.upper
    if np.all(diff == 0.0) and x_may and y_may:
        return DominanceVerdict("equal", checked)
    if np.all(diff >= 0.0) and np.any(diff > 0.0) and x_may:
        return DominanceVerdict("x_dominates", checked)
    if np.all(diff <= 0.0) and np.any(diff < 0.0) and y_may:
        return DominanceVerdict("y_dominates", checked)
    return DominanceVerdict("crossing", checked)


def _disjoint(x: Distribution, y: Distribution) -> bool:
    sx, sy = x.support(), y.support()
    if not (sx.finite and sy.finite):
        return False
    return sx.upper <= sy.lower or sy.upper <= sx.lower


def w1_auto(x: Distribution, y: Distribution, cfg: QuadConfig = QuadConfig()) -> W1Result:
    """W1 with the cheapest applicable method.

    Disjoint finite supports, then first-order dominance, reduce the distance
    to |E X - E Y| with no quadrature; anything else goes to ``w1_quantile``.
    """
    if _disjoint(x, y):
        return W1Result(abs(x.mean() - y.mean()), "fast_no_overlap", 0.0, True)
    verdict = dominance_check(x, y)
    if verdict.relation in ("x_dominates", "y_dominates"):
        return W1Result(abs(x.mean() - y.mean()), "fast_dominance", 0.0, True)
    return w1_quantile(x, y, cfg)


def _pair(xs, ys) -> tuple[np.ndarray, np.ndarray]:
    xa = np.asarray(xs, dtype=float).ravel()
    ya = np.asarray(ys, dtype=float).ravel()
    if xa.size == 0 or ya.size == 0:
        raise DomainError("need at least one sample on each side")
    if xa.size != ya.size:
        raise DomainError(
            f"sample sizes differ ({xa.size} vs {ya.size}); use w1_quantile on Empirical laws"
        )
    return xa, ya


def w1_empirical_sorted(xs: Sequence[float], ys: Sequence[float]) -> W1Result:
    """Exact W1 between two equal-size samples: mean gap of matched order statistics."""
    xa, ya = _pair(xs, ys)
    gaps = np.abs(np.sort(xa) - np.sort(ya))
    return W1Result(math.fsum(gaps) / xa.size, "empirical_sorted", 0.0, False)


def brute_force_w1(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Minimum over all n! matchings of the mean absolute gap. Refuses n > 8."""
    xa, ya = _pair(xs, ys)
    n = xa.size
    if n > _BRUTE_FORCE_MAX:
        raise DomainError(f"brute force limited to n <= {_BRUTE_FORCE_MAX}, got {n}")
    best = math.inf
    for perm in itertools.permutations(range(n)):
        cost = math.fsum(abs(xa[i] - ya[j]) for i, j in enumerate(perm))
        best = min(best, cost)
    return best / n
