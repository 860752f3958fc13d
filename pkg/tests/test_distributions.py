import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from w1copula.distributions import Empirical, Exponential, Normal, Uniform, parse_distribution
from w1copula.errors import DomainError, NonFiniteValueError, SpecError
from w1copula.quadrature import QuadConfig, integrate_unit
from w1copula.wasserstein import _tail_strip

FAMILIES = [
    Normal(0, 1),
    Normal(15, 1),
    Normal(-3, 0.25),
    Uniform(12, 16),
    Uniform(-1, 0.5),
    Exponential(2),
    Exponential(0.3),
    Empirical([3, 1, 2, 2, 7.5]),
    Empirical([0.0]),
]


def test_cdf_examples():
    assert Normal(0, 1).cdf(0) == 0.5
    assert Uniform(12, 16).cdf(14) == 0.5
    assert Empirical([1, 2, 3, 4]).cdf(2) == 0.5


def test_normal_cdf_relative_accuracy():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 40
    d = Normal(15, 1)
    for x in np.linspace(5, 25, 81):
        ref = mpmath.ncdf(mpmath.mpf(float(x)), 15, 1)
        assert abs((mpmath.mpf(d.cdf(x)) - ref) / ref) <= 1e-14


def test_quantile_examples():
    assert Uniform(12, 16).quantile(0.5) == 14
    assert Normal(15, 1).quantile(0.5) == 15
    # inf{x : F(x) >= 0.4} on the step cdf 1/3, 2/3, 1 at 1, 2, 3
    assert Empirical([3, 1, 2]).quantile(0.4) == 2


@pytest.mark.parametrize("u, expected", [(1 / 3, 1), (0.34, 2), (2 / 3, 2), (0.67, 3), (1.0, 3)])
def test_empirical_quantile_at_step_boundaries(u, expected):
    assert Empirical([1, 2, 3]).quantile(u) == expected


def test_quantile_endpoints():
    assert Uniform(2, 3).quantile(0) == 2
    assert Uniform(2, 3).quantile(1) == 3
    assert Exponential(1).quantile(0) == 0
    with pytest.raises(NonFiniteValueError):
        Normal(0, 1).quantile(0)
    with pytest.raises(NonFiniteValueError):
        Exponential(1).quantile(1.0)
    with pytest.raises(DomainError):
        Normal(0, 1).quantile(1.5)
    with pytest.raises(DomainError):
        Normal(0, 1).quantile(-0.1)


def test_cdf_rejects_non_finite():
    with pytest.raises(DomainError):
        Normal(0, 1).cdf(math.inf)
    with pytest.raises(DomainError):
        Uniform(0, 1).cdf(float("nan"))


def test_support():
    assert tuple(Uniform(2, 3).support()) == (2, 3, True)
    assert tuple(Normal(0, 1).support()) == (-math.inf, math.inf, False)
    assert tuple(Empirical([5, 9]).support()) == (5, 9, True)
    assert tuple(Exponential(1).support()) == (0, math.inf, False)


def test_mean():
    assert Uniform(12, 16).mean() == 14
    assert Exponential(2).mean() == 0.5
    assert Empirical([1, 2, 6]).mean() == 3


def test_constructor_preconditions():
    with pytest.raises(DomainError):
        Uniform(1, 1)
    with pytest.raises(DomainError):
        Normal(0, 0)
    with pytest.raises(DomainError):
        Exponential(-1)
    with pytest.raises(DomainError):
        Empirical([])


def test_empirical_ties_and_sorting():
    d = Empirical([2, 1, 2, 1])
    assert d.samples.tolist() == [1, 1, 2, 2]
    assert d.cdf(1) == 0.5
    assert d.quantile(0.5) == 1
    assert d.quantile(0.51) == 2
    with pytest.raises(ValueError):
        d.samples[0] = 5.0


@pytest.mark.parametrize("d", FAMILIES, ids=str)
def test_galois_probes(d):
    rng = np.random.default_rng(12345)
    u = rng.uniform(1e-9, 1 - 1e-9, 1000)
    assert np.all(d.cdf(d.quantile(u)) >= u - 1e-12)
    # x probes stop where cdf(x) nears 1: there rounding of cdf is amplified by
    # 1/density and quantile(cdf(x)) cannot be resolved to 1e-12
    lo, hi = d.quantile(1e-6), d.quantile(0.99)
    x = rng.uniform(lo - 1, hi, 1000)
    fx = d.cdf(x)
    pos = fx > 0
    assert np.all(d.quantile(fx[pos]) <= x[pos] + 1e-12)


@pytest.mark.parametrize("d", FAMILIES, ids=str)
def test_quantile_monotone(d):
    u = np.linspace(1e-9, 1 - 1e-9, 2001)
    assert np.all(np.diff(d.quantile(u)) >= 0)


@given(
    mu=st.floats(-50, 50),
    sigma=st.floats(0.01, 20),
    u=st.floats(1e-12, 1 - 1e-12),
)
@settings(max_examples=300, deadline=None)
def test_normal_galois_property(mu, sigma, u):
    d = Normal(mu, sigma)
    assert d.cdf(d.quantile(u)) >= u - 1e-12


@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=30), st.floats(1e-9, 1.0))
@settings(max_examples=300, deadline=None)
def test_empirical_quantile_is_generalized_inverse(samples, u):
    d = Empirical(samples)
    q = d.quantile(u)
    # q attains level u, and no smaller sample does
    assert d.cdf(q) >= u
    smaller = d.samples[d.samples < q]
    if smaller.size:
        assert d.cdf(smaller[-1]) < u


@pytest.mark.parametrize("d", [Normal(15, 1), Normal(-2, 3), Uniform(12, 16), Exponential(2)], ids=str)
def test_mean_equals_quantile_integral(d):
    cfg = QuadConfig()
    body = integrate_unit(d.quantile, cfg).value
    lower, _ = _tail_strip(d.quantile, cfg.tail_eps, cfg)
    upper, _ = _tail_strip(d.isf, cfg.tail_eps, cfg)
    assert abs(body + lower + upper - d.mean()) <= 1e-6


def test_isf_accurate_in_upper_tail():
    d = Normal(0, 1)
    assert d.isf(1e-20) == pytest.approx(9.262340089798408, rel=1e-13)
    assert Exponential(2).isf(1e-100) == pytest.approx(100 * math.log(10) / 2, rel=1e-14)


def test_parse_distribution(tmp_path):
    assert parse_distribution("normal:15,1") == Normal(15, 1)
    assert parse_distribution("uniform:12,16") == Uniform(12, 16)
    assert parse_distribution("exp:2") == Exponential(2)
    f = tmp_path / "s.csv"
    f.write_text("# samples\n3\n1\n\n2.5  # trailing comment\n")
    assert parse_distribution(f"empirical:@{f}") == Empirical([1, 2.5, 3])


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("uniform:3,1", "a ≥ b"),
        ("normal:0,-1", "sigma"),
        ("normal:0", "2 parameter"),
        ("normal:0,x", "non-numeric"),
        ("cauchy:0,1", "unknown"),
        ("Normal:0,1", "unknown"),
        ("empirical:@/nonexistent/file.csv", "unreadable"),
        ("exp", "FAMILY:PARAMS"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(SpecError, match=fragment):
        parse_distribution(text)


def test_parse_error_reports_position():
    with pytest.raises(SpecError) as info:
        parse_distribution("normal:1,abc")
    assert info.value.token == "abc"
    assert info.value.position == 9
