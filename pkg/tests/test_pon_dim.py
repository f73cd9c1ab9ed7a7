from fractions import Fraction

import numpy as np
import pytest

from vhcn import (
    ActiveUserDistribution,
    ParameterError,
    PonScenario,
    PonStandard,
    b_percentile,
    binomial_cdf,
    connected_users,
    default_standards,
    monte_carlo_b_percentile,
    percentile_active,
    prob_full_speed,
    table1,
)
from vhcn import pon_dim

from oracles import enumerate_binomial_pmf, exact_cdf, scan_percentile

GPON = PonStandard("GPON", 2.5e9)
XGPON = PonStandard("XGPON", 10e9)
TWDM = PonStandard("TWDM-PON", 40e9)
P15 = Fraction(15, 100)


@pytest.mark.parametrize("split, filling, expected", [
    (64, 0.6, 38), (64, 1.0, 64), (64, 0.25, 16), (64, 0.08, 5), (64, 0.9999, 63), (1, 0.01, 1),
    (100, 0.29, 29),
])
def test_connected_users(split, filling, expected):
    assert connected_users(split, filling) == expected


def test_cdf_hand_expansion():
    # 0.85**5 + 5*0.15*0.85**4 + 10*0.15**2*0.85**3
    assert binomial_cdf(ActiveUserDistribution(5, 0.15), 2) == pytest.approx(0.973388125, abs=1e-15)
    assert binomial_cdf(ActiveUserDistribution(16, 0.15), 2) == pytest.approx(0.5613793198124558, abs=1e-14)


@pytest.mark.parametrize("n", [0, 1, 5, 12, 16])
def test_pmf_matches_enumeration(n):
    dist = ActiveUserDistribution(n, 0.15)
    oracle = enumerate_binomial_pmf(n, P15)
    for k in range(n + 1):
        assert dist.pmf(k) == pytest.approx(float(oracle[k]), abs=1e-15)


@pytest.mark.parametrize("n", [5, 16, 38, 64])
def test_cdf_matches_rational_oracle(n):
    dist = ActiveUserDistribution(n, 0.15)
    for k in range(n + 1):
        assert dist.cdf(k) == pytest.approx(float(exact_cdf(n, P15, k)), abs=1e-13)


def test_cdf_matches_scipy_large_n():
    stats = pytest.importorskip("scipy.stats")
    dist = ActiveUserDistribution(2000, 0.3)
    for k in (400, 590, 600, 610, 800):
        assert dist.cdf(k) == pytest.approx(stats.binom.cdf(k, 2000, 0.3), abs=1e-10)


def test_cdf_endpoints_and_range():
    dist = ActiveUserDistribution(64, 0.15)
    assert dist.cdf(64) == 1.0
    with pytest.raises(ParameterError):
        dist.cdf(65)
    with pytest.raises(ParameterError):
        dist.cdf(-1)


def test_degenerate_probabilities():
    assert ActiveUserDistribution(4, 0.0).cdf(0) == 1.0
    assert ActiveUserDistribution(4, 1.0).cdf(3) == 0.0
    assert ActiveUserDistribution(4, 1.0).pmf(4) == 1.0


@pytest.mark.parametrize("n, expected", [(64, 17), (38, 11), (16, 6), (5, 3)])
def test_percentile_active(n, expected):
    assert percentile_active(ActiveUserDistribution(n, 0.15), 0.99) == expected
    assert expected == scan_percentile(n, P15, Fraction(99, 100))


def test_percentile_upper_tail():
    dist = ActiveUserDistribution(10, 0.5)
    p = (dist.cdf(9) + 1.0) / 2
    assert percentile_active(dist, p) == 10


def test_b_percentile_first_column():
    scn = PonScenario(filling_factor=1.0)
    assert b_percentile(GPON, scn) == pytest.approx(2.5e9 / 17)
    assert b_percentile(XGPON, scn) == pytest.approx(10e9 / 17)
    assert b_percentile(TWDM, scn) == 1e9


@pytest.mark.parametrize("std, filling, expected", [
    (GPON, 0.25, 0.5613793198124558),
    (XGPON, 1.0, 0.6374344722591913),
    (GPON, 1.0, 0.0022819866108506346),
    (XGPON, 0.6, 0.9793345438761496),
])
def test_prob_full_speed(std, filling, expected):
    assert prob_full_speed(std, PonScenario(filling_factor=filling)) == pytest.approx(expected, abs=1e-13)


def test_full_speed_threshold_clamped():
    scn = PonScenario(filling_factor=0.08)  # 5 users, 40 would fit
    assert pon_dim.full_speed_threshold(TWDM, scn) == 5
    assert pon_dim.full_speed_threshold(PonStandard("slow", 0.5e9), scn) == 0


def test_table1_shapes_and_order():
    fillings = [0.25, 1.0, 0.08]
    grid = table1([GPON], fillings)
    assert [c.filling_factor for c in grid[0]] == fillings
    single = table1([XGPON], [0.6])
    scn = PonScenario(filling_factor=0.6)
    assert len(single) == 1 and len(single[0]) == 1
    assert single[0][0].b_percentile == b_percentile(XGPON, scn)
    assert single[0][0].prob_full_speed == prob_full_speed(XGPON, scn)
    with pytest.raises(ParameterError):
        table1([], [0.5])
    with pytest.raises(ParameterError):
        table1([GPON], [])


def test_default_standards():
    assert [(s.name, s.downstream_capacity) for s in default_standards()] == [
        ("GPON", 2.5e9), ("XGPON", 10e9), ("TWDM-PON", 40e9)]


@pytest.mark.parametrize("kwargs", [
    dict(splitting_factor=0), dict(filling_factor=0), dict(filling_factor=1.2), dict(activity_factor=0),
    dict(b_max=0), dict(availability=1.0), dict(availability=0.0),
])
def test_scenario_invariants(kwargs):
    with pytest.raises(ParameterError):
        PonScenario(**kwargs)


def test_monte_carlo_gpon_full():
    assert monte_carlo_b_percentile(GPON, PonScenario(), samples=1_000_000, seed=7) == pytest.approx(2.5e9 / 17)


def test_monte_carlo_deterministic_and_worker_independent():
    scn = PonScenario(filling_factor=0.6)
    a = pon_dim.monte_carlo(GPON, scn, samples=300_001, seed=3, workers=1)
    b = pon_dim.monte_carlo(GPON, scn, samples=300_001, seed=3, workers=4)
    assert np.array_equal(a.active_counts, b.active_counts)
    assert a.b_percentile == b.b_percentile and a.prob_full_speed == b.prob_full_speed
    c = pon_dim.monte_carlo(GPON, scn, samples=300_001, seed=4)
    assert not np.array_equal(a.active_counts, c.active_counts)


def test_monte_carlo_single_user():
    scn = PonScenario(splitting_factor=1, filling_factor=1.0, activity_factor=0.005)
    # CDF(0) = 0.995 >= 0.99: the lone user is idle often enough to keep the cap
    assert monte_carlo_b_percentile(GPON, scn, samples=100_000, seed=1) == 1e9


def test_monte_carlo_rejects_small_samples():
    with pytest.raises(ParameterError):
        monte_carlo_b_percentile(GPON, PonScenario(), samples=100)


def test_empirical_quantile_exceeded():
    values = np.arange(1, 101, dtype=float)
    # at least 99 of 100 values are >= 2
    assert pon_dim.empirical_quantile_exceeded(values, 0.99) == 2.0
    assert pon_dim.empirical_quantile_exceeded(values, 0.5) == 51.0


def test_knife_edge_detection():
    dist = ActiveUserDistribution(5, 0.15)
    on_edge = PonScenario(filling_factor=0.08, availability=dist.cdf(2) + 1e-6)
    assert pon_dim.on_knife_edge(on_edge, 1_000_000)
    assert not pon_dim.on_knife_edge(PonScenario(), 1_000_000)
