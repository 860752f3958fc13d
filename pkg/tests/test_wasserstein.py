import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from w1copula.copulas import FIGURE_RHOS, M, PI, W, gaussian
from w1copula.distributions import Empirical, Exponential, Normal, Uniform
from w1copula.errors import DomainError
from w1copula.wasserstein import (
    brute_force_w1,
    dominance_check,
    expected_distance,
    w1_auto,
    w1_cdf_area,
    w1_empirical_sorted,
    w1_quantile,
)

# N(15,1) vs U(12,16): 30-digit mpmath quadrature of |Fx - Fy| on [12, 16] split
# at the single CDF crossing (t = 12.00549...), plus the two tails in closed form
# E(12 - X)+ = phi(3) - 3 Phi(-3) and E(X - 16)+ = phi(1) - Phi(-1).
FIG_PAIR_W1 = 1.0007717298170385
# Exp(1) vs U(0,2): mpmath quadrature on [0, 2] split at the root of 1 - e^-t = t/2,
# plus the tail e^-2.
EXP_UNIF_W1 = 0.3238051189459574

BATTERY = [
    (Normal(15, 1), Uniform(12, 16)),
    (Normal(0, 1), Normal(3, 1)),
    (Uniform(0, 1), Uniform(0, 2)),
    (Exponential(1), Uniform(0, 2)),
    (Empirical([0.3, 1.1, 2.0, 2.0, 4.5]), Empirical([-1.0, 0.7, 3.2])),
]
BATTERY_IDS = ["normal-uniform", "normal-normal", "uniform-uniform", "exp-uniform", "empirical"]

COPULAS = [M, W, PI] + [gaussian(r) for r in FIGURE_RHOS]


def test_quantile_route_examples():
    assert w1_quantile(Uniform(0, 1), Uniform(0, 1)).value == 0.0
    assert w1_quantile(Normal(0, 1), Normal(3, 1)).value == pytest.approx(3.0, abs=1e-6)
    r = w1_quantile(Normal(15, 1), Uniform(12, 16))
    assert r.method == "quantile" and not r.fast_path
    assert r.value == pytest.approx(FIG_PAIR_W1, abs=1e-9)


def test_cdf_route_examples():
    assert w1_cdf_area(Uniform(0, 1), Uniform(0, 2)).value == pytest.approx(0.5, abs=1e-12)
    assert w1_cdf_area(Empirical([0]), Empirical([2.5])).value == pytest.approx(2.5, abs=1e-12)
    r = w1_cdf_area(Normal(15, 1), Uniform(12, 16))
    assert r.method == "cdf_area"
    assert r.value == pytest.approx(FIG_PAIR_W1, abs=1e-9)


def test_exp_uniform_both_routes():
    x, y = Exponential(1), Uniform(0, 2)
    assert w1_quantile(x, y).value == pytest.approx(EXP_UNIF_W1, abs=1e-9)
    assert w1_cdf_area(x, y).value == pytest.approx(EXP_UNIF_W1, abs=1e-9)


@pytest.mark.parametrize("x, y", BATTERY, ids=BATTERY_IDS)
def test_route_equivalence(x, y):
    q, c = w1_quantile(x, y), w1_cdf_area(x, y)
    assert abs(q.value - c.value) <= 1e-6 + q.error_estimate + c.error_estimate
    assert abs(q.value - c.value) <= 1e-8


def test_empirical_pair_closed_form():
    # merged breakpoints of the two step quantiles, summed by hand
    x, y = BATTERY[-1]
    grid = np.unique(np.concatenate([np.arange(6) / 5, np.arange(4) / 3]))
    mid = (grid[1:] + grid[:-1]) / 2
    exact = math.fsum(np.diff(grid) * np.abs(x.quantile(mid) - y.quantile(mid)))
    assert w1_quantile(x, y).value == pytest.approx(exact, abs=1e-12)
    assert w1_cdf_area(x, y).value == pytest.approx(exact, abs=1e-12)


@pytest.mark.parametrize("x, y", BATTERY, ids=BATTERY_IDS)
def test_copula_lower_bound(x, y):
    w1 = w1_quantile(x, y).value
    for c in COPULAS:
        assert expected_distance(x, y, c) >= w1 - 1e-6
    assert abs(expected_distance(x, y, M) - w1) <= 1e-6


def test_expected_distance_examples():
    for d in (Normal(2, 3), Uniform(-1, 4), Exponential(0.5)):
        assert expected_distance(d, d, M) == 0.0
    assert expected_distance(Uniform(0, 1), Uniform(0, 1), W) == pytest.approx(0.5, abs=1e-9)
    # independent uniforms: E|U - V| = 1/3
    assert expected_distance(Uniform(0, 1), Uniform(0, 1), PI) == pytest.approx(1 / 3, abs=1e-9)
    # independent standard normals: E|Z1 - Z2| = 2/sqrt(pi)
    assert expected_distance(Normal(0, 1), Normal(0, 1), PI) == pytest.approx(2 / math.sqrt(math.pi), abs=1e-8)


def test_expected_distance_m_equals_cdf_area():
    x, y = Normal(15, 1), Uniform(12, 16)
    assert expected_distance(x, y, M) == w1_cdf_area(x, y).value
    assert expected_distance(x, y, gaussian(1.0)) == w1_cdf_area(x, y).value


def test_gaussian_area_ordering():
    x, y = Normal(15, 1), Uniform(12, 16)
    rhos = sorted(FIGURE_RHOS)
    areas = [expected_distance(x, y, gaussian(r)) for r in rhos]
    for lo, hi in zip(areas, areas[1:]):
        assert hi <= lo + 1e-6
    w_area = expected_distance(x, y, W)
    m_area = expected_distance(x, y, M)
    assert all(m_area - 1e-6 <= a <= w_area + 1e-6 for a in areas)
    assert m_area == pytest.approx(FIG_PAIR_W1, abs=1e-9)


def test_gaussian_pm_one_reduce_to_bounds():
    x, y = Normal(15, 1), Uniform(12, 16)
    assert expected_distance(x, y, gaussian(-1)) == pytest.approx(expected_distance(x, y, W), abs=1e-12)


@pytest.mark.parametrize(
    "x, y, relation",
    [
        (Normal(3, 1), Normal(0, 1), "x_dominates"),
        (Normal(0, 1), Normal(0, 2), "crossing"),
        (Uniform(2, 3), Uniform(0, 1), "x_dominates"),
        (Uniform(0, 1), Uniform(2, 3), "y_dominates"),
        (Normal(1, 1), Normal(1, 1), "equal"),
        (Exponential(0.5), Exponential(2), "x_dominates"),
        (Uniform(0, 4), Uniform(1, 2), "crossing"),
        (Uniform(0, 1), Uniform(0.5, 3), "y_dominates"),
        (Normal(15, 1), Uniform(12, 16), "crossing"),
    ],
)
def test_dominance_check(x, y, relation):
    assert dominance_check(x, y).relation == relation


def test_dominance_grid_counts_levels():
    v = dominance_check(Uniform(0, 1), Uniform(0.5, 3), levels=10)
    assert v.checked_levels == 10 + 2 * 10
    assert dominance_check(Normal(3, 1), Normal(0, 1)).checked_levels == 0
    with pytest.raises(DomainError):
        dominance_check(Normal(0, 1), Normal(1, 1), levels=2)


def test_auto_fast_paths():
    r = w1_auto(Uniform(2, 3), Uniform(0, 1))
    assert (r.value, r.method, r.fast_path, r.error_estimate) == (2.0, "fast_no_overlap", True, 0.0)
    r = w1_auto(Normal(3, 1), Normal(0, 1))
    assert r.method == "fast_dominance" and r.fast_path
    assert r.value == pytest.approx(3.0, abs=1e-6)
    r = w1_auto(Normal(0, 1), Normal(0, 2))
    assert r.method == "quantile" and not r.fast_path


def test_auto_touching_supports_count_as_disjoint():
    r = w1_auto(Uniform(0, 1), Uniform(1, 2))
    assert r.method == "fast_no_overlap" and r.value == 1.0


FAST_CASES = [
    (Uniform(2, 3), Uniform(0, 1)),
    (Uniform(0, 1), Uniform(1, 2)),
    (Normal(3, 1), Normal(0, 1)),
    (Normal(-2, 0.5), Normal(4, 0.5)),
    (Exponential(0.5), Exponential(2)),
    (Uniform(0, 1), Uniform(0.5, 3)),
    (Empirical([0, 1, 2]), Empirical([5, 6, 9])),
    (Empirical([0, 1, 2, 3]), Empirical([0.5, 1.5, 2.5, 3.5])),
]


@pytest.mark.parametrize("x, y", FAST_CASES, ids=str)
def test_fast_path_agrees_with_quadrature(x, y):
    fast = w1_auto(x, y)
    assert fast.fast_path
    assert abs(fast.value - w1_quantile(x, y).value) <= 1e-6


@pytest.mark.parametrize(
    "make",
    [
        lambda c: (Normal(15 + c, 1), Uniform(12 + c, 16 + c)),
        lambda c: (Normal(c, 1), Normal(c, 2.5)),
        lambda c: (Uniform(c, c + 1), Uniform(c - 0.5, c + 1.5)),
    ],
)
@pytest.mark.parametrize("shift", [-7.25, 0.5, 3.0])
def test_translation_covariance(make, shift):
    base = w1_quantile(*make(0.0)).value
    assert w1_quantile(*make(shift)).value == pytest.approx(base, abs=1e-9)


@pytest.mark.parametrize("c", [0.0, 0.3, -2.0, 11.5])
def test_shift_distance_is_shift(c):
    for d, shifted in ((Normal(1, 2), Normal(1 + c, 2)), (Uniform(0, 3), Uniform(c, 3 + c))):
        assert w1_quantile(shifted, d).value == pytest.approx(abs(c), abs=1e-9)


def test_sorted_examples():
    assert w1_empirical_sorted([1, 2, 3], [1, 2, 3]).value == 0.0
    assert w1_empirical_sorted([0, 1], [1, 2]).value == 1.0
    r = w1_empirical_sorted([3, 1, 2], [10, 30, 20])
    assert (r.value, r.method, r.error_estimate, r.fast_path) == (18.0, "empirical_sorted", 0.0, False)
    with pytest.raises(DomainError):
        w1_empirical_sorted([1, 2], [1, 2, 3])
    with pytest.raises(DomainError):
        w1_empirical_sorted([], [])


def test_brute_force_examples():
    assert brute_force_w1([5], [9]) == 4.0
    assert brute_force_w1([0, 1], [0, 1]) == 0.0
    assert brute_force_w1([0, 10], [4, 5]) == 4.5
    with pytest.raises(DomainError):
        brute_force_w1(range(9), range(9))


def _dyadic_instance(rng):
    n = int(rng.integers(1, 8))
    xs = rng.integers(-40, 41, n) / 8
    ys = rng.integers(-40, 41, n) / 8
    return xs, ys


def test_sorted_equals_brute_force_dyadic():
    rng = np.random.default_rng(20240601)
    for _ in range(200):
        xs, ys = _dyadic_instance(rng)
        assert w1_empirical_sorted(xs, ys).value == brute_force_w1(xs, ys)


@given(st.lists(st.floats(-100, 100), min_size=1, max_size=6).flatmap(
    lambda xs: st.tuples(st.just(xs), st.lists(st.floats(-100, 100), min_size=len(xs), max_size=len(xs)))
))
@settings(max_examples=200, deadline=None)
def test_sorted_matches_brute_force_floats(pair):
    xs, ys = pair
    # arbitrary floats: distinct optimal matchings may differ by rounding
    assert w1_empirical_sorted(xs, ys).value == pytest.approx(brute_force_w1(xs, ys), rel=1e-12, abs=1e-12)


def test_sorted_agrees_with_quantile_route():
    rng = np.random.default_rng(3)
    xs, ys = rng.normal(size=40), rng.exponential(size=40)
    assert w1_quantile(Empirical(xs), Empirical(ys)).value == pytest.approx(
        w1_empirical_sorted(xs, ys).value, abs=1e-10
    )


def _w1(a, b):
    if a.n == b.n:
        return w1_empirical_sorted(a.samples, b.samples).value
    return w1_quantile(a, b).value


def test_metric_axioms_empirical_triples():
    rng = np.random.default_rng(77)
    for i in range(200):
        if i % 2:
            n = int(rng.integers(1, 7))
            sizes = (n, n, n)
        else:
            sizes = tuple(int(k) for k in rng.integers(1, 7, 3))
        x, y, z = (Empirical(rng.normal(0, 3, k)) for k in sizes)
        assert _w1(x, y) == _w1(y, x)
        assert _w1(x, x) == 0.0
        assert _w1(x, z) <= _w1(x, y) + _w1(y, z) + 1e-12
