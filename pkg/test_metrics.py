"""
Tests for run summaries, tail quantiles and scaling fits.
"""

import warnings

import numpy as np
import pytest

from chain_simulation.config import ScalingModel
from chain_simulation.errors import UnfinalizedTraceError
from chain_simulation.harness.runner import simulate_run
from chain_simulation.metrics import (
    additional_wait,
    aggregate_summaries,
    compute_summary,
    fit_scaling,
    mean_confidence_interval,
    nearest_rank,
    per_node_tail,
    queue_from_waits,
)
from chain_simulation.model import EdgeOracle, SimState


def _unmatched_run(horizon: int) -> SimState:
    state = SimState(EdgeOracle(seed=0, p=0.0))
    for _ in range(horizon):
        state.arrive()
        state.end_step()
    return state.finalize(horizon)


def test_nobody_matched_in_three_steps():
    summary = compute_summary(_unmatched_run(3), 3)
    assert summary.waits.tolist() == [2, 1, 0]
    assert summary.total_wait == 3
    assert summary.queue.tolist() == [1, 2, 0]
    assert summary.mean_wait == pytest.approx(1.0)
    assert summary.unmatched == 3
    assert summary.mean_wait_uncensored is None
    assert summary.censored.all()


def test_summary_requires_finalized_state():
    state = SimState(EdgeOracle(seed=0, p=0.0))
    for _ in range(3):
        state.arrive()
        state.end_step()
    with pytest.raises(UnfinalizedTraceError):
        compute_summary(state, 3)


def test_immediate_matches_wait_zero():
    state, _ = simulate_run("greedy", 1.0, 40, seed=0)
    summary = compute_summary(state, 40)
    assert summary.total_wait == 0
    assert summary.matched == 40
    assert summary.quantiles["0.99"] == 0


def test_waits_equal_queue_occupancy():
    state, policy = simulate_run("greedy", 0.1, 2000, seed=7)
    summary = compute_summary(state, 2000, extras=policy.extras())
    assert summary.total_wait == int(summary.queue.sum())
    assert summary.mean_wait == pytest.approx(summary.mean_queue)
    arrivals, services = state.patient_times()
    assert np.array_equal(queue_from_waits(arrivals, services, 2000), summary.queue)
    assert summary.matched + summary.unmatched == 2000
    assert summary.quantiles["0.5"] <= summary.quantiles["0.9"] <= summary.quantiles["0.99"]
    assert per_node_tail(summary, 0.1) == summary.quantiles["0.9"]
    assert summary.scalars()["extras"]["extension_lengths"]["count"] == len(policy.extension_lengths)


def test_nearest_rank():
    waits = np.arange(10)
    assert nearest_rank(waits, 0.1) == 9
    assert nearest_rank(waits, 0.5) == 5
    assert nearest_rank(np.full(7, 4), 0.05) == 4
    with pytest.raises(ValueError):
        nearest_rank(waits, 0.0)
    with pytest.raises(ValueError):
        nearest_rank(np.array([]), 0.1)


def test_additional_wait_probe():
    summary = compute_summary(_unmatched_run(3), 3)
    assert additional_wait(summary, 1) == pytest.approx(2.0)
    assert additional_wait(summary, 2) == pytest.approx(1.0)
    assert additional_wait(summary, 3) is None
    with pytest.raises(ValueError):
        additional_wait(summary, 4)


def test_confidence_interval():
    assert mean_confidence_interval([3.0]) == (3.0, 3.0, 3.0)
    mean, low, high = mean_confidence_interval([1.0, 2.0, 3.0])
    assert mean == pytest.approx(2.0)
    assert low < mean < high
    assert high - mean == pytest.approx(mean - low)


def test_aggregate_over_replications():
    summaries = []
    for seed in (1, 2, 3):
        state, policy = simulate_run("batch", 0.2, 600, seed=seed, c=1.0)
        summaries.append(compute_summary(state, 600, extras=policy.extras()))
    aggregate = aggregate_summaries(summaries)
    assert aggregate["replications"] == 3
    assert aggregate["mean_phase_length"] == pytest.approx(5.0)
    assert aggregate["phases"] == 3 * 120
    low, high = aggregate["mean_wait_ci"]
    assert low <= aggregate["mean_wait"] <= high
    with pytest.raises(ValueError):
        aggregate_summaries([])


def test_scaling_fit_recovers_exact_coefficients():
    grid = np.array([0.05, 0.1, 0.2, 0.4])
    fit = fit_scaling([(p, 5 / p) for p in grid], ScalingModel.ONE_OVER_P)
    assert fit.coefficient == pytest.approx(5.0)
    assert fit.residual == pytest.approx(0.0, abs=1e-9)
    assert fit.points == 4

    log_fit = fit_scaling([(p, 7 / p * np.log(1 / p)) for p in grid], ScalingModel.ONE_OVER_P_LOG)
    assert log_fit.coefficient == pytest.approx(7.0)
    assert log_fit.residual == pytest.approx(0.0, abs=1e-9)


def test_scaling_fit_of_zero_waits():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        fit = fit_scaling([(0.7, 0.0), (0.8, 0.0), (0.9, 0.0)], ScalingModel.ONE_OVER_P_LOG)
    assert fit.coefficient == 0.0
    assert fit.residual == 0.0


def test_scaling_fit_input_checks():
    with pytest.raises(ValueError):
        fit_scaling([(0.1, 10.0), (0.2, 5.0)], ScalingModel.ONE_OVER_P)
    with pytest.raises(ValueError):
        fit_scaling([(0.1, 10.0), (0.1, 11.0), (0.2, 5.0)], ScalingModel.ONE_OVER_P)
    with pytest.raises(ValueError):
        fit_scaling([(0.1, 10.0), (0.2, 5.0), (1.0, 1.0)], ScalingModel.ONE_OVER_P)
