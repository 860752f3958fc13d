"""1-Wasserstein distances between univariate distributions, computed through
quantile functions, CDF areas and copula-parameterized couplings."""

from .copulas import FIGURE_RHOS, M, PI, W, CopulaSpec, copula_eval, copula_sample, gaussian, verify_copula_axioms
from .bvn import bivariate_normal_cdf
from .distributions import Empirical, Exponential, Normal, SupportBounds, Uniform
from .errors import ConvergenceError, DomainError, IntegrandError, NonFiniteValueError, SpecError
from .montecarlo import MCEstimate, mc_expected_distance, theorem_certificate
from .quadrature import QuadConfig, QuadResult, integrate_line, integrate_unit
from .wasserstein import (
    DominanceVerdict,
    W1Result,
    brute_force_w1,
    dominance_check,
    expected_distance,
    w1_auto,
    w1_cdf_area,
    w1_empirical_sorted,
    w1_quantile,
)

__version__ = "0.1.0"

__all__ = [
    "FIGURE_RHOS",
    "M",
    "PI",
    "W",
    "CopulaSpec",
    "copula_eval",
    "copula_sample",
    "gaussian",
    "verify_copula_axioms",
    "bivariate_normal_cdf",
    "Empirical",
    "Exponential",
    "Normal",
    "SupportBounds",
    "Uniform",
    "ConvergenceError",
    "DomainError",
    "IntegrandError",
    "NonFiniteValueError",
    "SpecError",
    "MCEstimate",
    "mc_expected_distance",
    "theorem_certificate",
    "QuadConfig",
    "QuadResult",
    "integrate_line",
    "integrate_unit",
    "DominanceVerdict",
    "W1Result",
    "brute_force_w1",
    "dominance_check",
    "expected_distance",
    "w1_auto",
    "w1_cdf_area",
    "w1_empirical_sorted",
    "w1_quantile",
]
