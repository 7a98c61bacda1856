"""
Tests for the drift random walk: parameters, root solving, stationary law,
bounds and the Monte Carlo simulation.
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from chain_simulation.errors import RegimeError
from chain_simulation.harness.walk_report import WALK_GRID
from chain_simulation.randwalk import (
    WalkParams,
    approximate_mean_bound,
    exact_alpha,
    expected_value_bound,
    occupancy_distance,
    root_bracket,
    root_function,
    simulate_walk,
    solve_root,
    steady_state,
    tail_bound,
    walk_statistics,
)

REFERENCE = WalkParams(M=50, K=20, rho=0.06, beta=0.2)
OUT_OF_REGIME = WalkParams(M=0, K=2, rho=0.75, beta=0.5)


def test_balance_is_enforced():
    with pytest.raises(ValidationError):
        WalkParams(M=10, K=5, rho=0.3, beta=0.2)
    with pytest.raises(ValidationError):
        WalkParams(M=-1, K=20, rho=0.06, beta=0.2)


def test_derived_parameters():
    assert REFERENCE.beta_prime == pytest.approx(0.26)
    assert REFERENCE.k_prime == 21
    assert REFERENCE.integer_jump
    assert not WalkParams(M=0, K=2.5, rho=0.5, beta=0.25).integer_jump


def test_expected_value_bounds():
    assert expected_value_bound(REFERENCE) == pytest.approx(170.0)
    assert expected_value_bound(OUT_OF_REGIME) == pytest.approx(6.0)


def test_tail_bound():
    assert tail_bound(REFERENCE, 0.2) == pytest.approx(50 + 120 * math.log(10), abs=1e-9)
    assert tail_bound(REFERENCE, 0.2) == pytest.approx(326.3, abs=0.05)
    for delta in (0.0, 1.0, 2.0):
        with pytest.raises(ValueError):
            tail_bound(REFERENCE, delta)


def test_bounds_reject_large_beta():
    params = WalkParams(M=0, K=2, rho=0.9, beta=0.8)
    with pytest.raises(RegimeError):
        expected_value_bound(params)


def test_root_bracket_and_solution():
    lower, upper = root_bracket(REFERENCE)
    assert lower == pytest.approx(0.4127, abs=1e-4)
    assert upper == pytest.approx(0.8254, abs=1e-4)
    x, alpha = solve_root(REFERENCE)
    assert lower < x < upper
    assert x == pytest.approx(0.48, abs=0.005)
    assert abs(root_function(x, REFERENCE.beta_prime)) <= 1e-12
    assert alpha == pytest.approx(1 - x / 21)


def test_root_rejects_large_beta_prime():
    assert OUT_OF_REGIME.beta_prime >= 0.6
    with pytest.raises(RegimeError):
        solve_root(OUT_OF_REGIME)
    with pytest.raises(RegimeError):
        steady_state(OUT_OF_REGIME)


def test_exact_alpha_solves_the_balance_equation():
    for M, K, rho, beta in WALK_GRID:
        params = WalkParams(M=M, K=K, rho=rho, beta=beta)
        alpha = exact_alpha(params)
        assert 0 < alpha < 1
        assert alpha == pytest.approx((1 - rho) + rho * alpha ** (K + 1), abs=1e-12)


def test_steady_state_over_the_grid():
    for M, K, rho, beta in WALK_GRID:
        params = WalkParams(M=M, K=K, rho=rho, beta=beta)
        state = steady_state(params)
        assert state.residual <= 1e-9
        assert 0 < state.alpha < 1
        total = state.s_M + sum(state.level(params, M + i) for i in range(1, 5000))
        assert total == pytest.approx(1.0, abs=1e-6)
        assert state.mean(params) <= expected_value_bound(params)
        assert approximate_mean_bound(params) > M


def test_stationary_tail_is_below_delta_at_the_tail_bound():
    state = steady_state(REFERENCE)
    for delta in (0.05, 0.2):
        assert state.tail(REFERENCE, tail_bound(REFERENCE, delta)) <= delta
    assert state.tail(REFERENCE, 0) == 1.0


def test_walk_transitions():
    params = WalkParams(M=10, K=5, rho=0.26, beta=0.3)
    path = simulate_walk(params, 5000, seed=1)
    assert path[: params.M + 2].tolist() == list(range(params.M + 2))
    for y, nxt in zip(path[:-1], path[1:]):
        if y > params.M:
            assert nxt in (y + 1, max(y - 5, params.M))
        else:
            assert nxt == y + 1
    assert path.min() >= 0
    assert np.array_equal(path, simulate_walk(params, 5000, seed=1))


def test_simulation_input_checks():
    with pytest.raises(ValueError):
        simulate_walk(WalkParams(M=0, K=2.5, rho=0.5, beta=0.25), 100, seed=0)
    with pytest.raises(ValueError):
        simulate_walk(REFERENCE, 0, seed=0)


def test_monte_carlo_respects_bounds():
    for M, K, rho, beta in WALK_GRID:
        params = WalkParams(M=M, K=K, rho=rho, beta=beta)
        stats = walk_statistics(simulate_walk(params, 200_000, seed=3), params)
        assert stats["kept"] == 100_000
        assert stats["mean"] <= expected_value_bound(params)
        for key, frequency in stats["exceedance"].items():
            assert frequency <= float(key)


def test_occupancy_matches_stationary_law():
    params = WalkParams(M=10, K=5, rho=0.26, beta=0.3)
    trajectory = simulate_walk(params, 200_000, seed=5)
    assert occupancy_distance(trajectory, params, steady_state(params)) < 0.08
