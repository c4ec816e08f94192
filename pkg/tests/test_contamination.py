"""Contamination probability math: anchors, stability, Monte Carlo agreement."""

import math

import numpy as np
import pytest

from algobench.contamination import (
    collision_prob_approx,
    collision_prob_exact,
    coverage_threshold,
    expected_present,
    uniform_q,
)


def test_exact_formula_small_cases():
    assert collision_prob_exact(0.0, 100) == 0.0
    assert collision_prob_exact(0.5, 0) == 0.0
    assert collision_prob_exact(1.0, 3) == 1.0
    assert collision_prob_exact(0.5, 1) == pytest.approx(0.5)
    assert collision_prob_exact(0.5, 2) == pytest.approx(0.75)


def test_exact_matches_direct_power_for_moderate_q():
    for q, n in [(0.1, 10), (0.01, 250), (0.3, 7)]:
        assert collision_prob_exact(q, n) == pytest.approx(1 - (1 - q) ** n, rel=1e-12)


def test_approx_anchor_one_minus_exp_minus_ten():
    # q * N = 10 => 1 - e^-10
    p = collision_prob_approx(1e-5, 10**6)
    assert abs(p - 0.9999546) < 1e-9
    assert p == pytest.approx(1 - math.exp(-10), rel=1e-15)


def test_exact_vs_approx_tight_for_small_q():
    exact = collision_prob_exact(1e-9, 10**6)
    approx = collision_prob_approx(1e-9, 10**6)
    assert abs(exact - approx) < 1e-9
    assert exact > 0  # log-domain stability: no underflow to zero


def test_log_domain_stability_for_tiny_q():
    p = collision_prob_exact(1e-15, 1000)
    assert p == pytest.approx(1e-12, rel=1e-6)


def test_validation_errors():
    with pytest.raises(ValueError):
        collision_prob_exact(-0.1, 10)
    with pytest.raises(ValueError):
        collision_prob_exact(1.5, 10)
    with pytest.raises(ValueError):
        collision_prob_exact(0.5, -1)
    with pytest.raises(ValueError):
        collision_prob_approx(-1e-9, 10)
    with pytest.raises(ValueError):
        uniform_q(5, 4)


def test_uniform_q_and_expected_present():
    assert uniform_q(10, 1000) == 0.01
    probs = [0.5, 0.5]
    assert expected_present(probs, 1) == pytest.approx(1.0)
    assert expected_present(probs, 2) == pytest.approx(1.5)


def test_coverage_threshold_coupon_collector_scale():
    assert coverage_threshold(1, 100) == 0.0
    assert coverage_threshold(math.e ** 2, 100) == pytest.approx(200, rel=1e-6)
    with pytest.raises(ValueError):
        coverage_threshold(0, 100)


@pytest.mark.parametrize("q,n_draws", [(1e-3, 1000), (5e-4, 3000)])
def test_monte_carlo_agreement_three_sigma(q, n_draws):
    trials = 200_000
    rng = np.random.default_rng(42)
    hits = np.count_nonzero(rng.binomial(n_draws, q, size=trials) > 0)
    observed = hits / trials
    expected = collision_prob_exact(q, n_draws)
    sigma = math.sqrt(expected * (1 - expected) / trials)
    assert abs(observed - expected) <= 3 * sigma
