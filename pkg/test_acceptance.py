"""
Tests for the acceptance criteria: the numeric evaluations on hand-made
inputs, the shared experiment cache and the accept subcommand.
"""

import json

import pytest
from pydantic import ValidationError

from chain_simulation.config import LemmaName, PolicyName, SimulationConfig
from chain_simulation.harness import AcceptanceRequest, LemmaReport, LemmaResult, WalkRequest, build_walk_report, run_acceptance
from chain_simulation.harness.acceptance import (
    SCALING_GRID,
    AcceptanceRun,
    evaluate_batch_scaling,
    evaluate_clear_all,
    evaluate_greedy_batch,
    evaluate_greedy_scaling,
    evaluate_identity,
    evaluate_lemmas,
    evaluate_lower_bound,
    evaluate_multi_donor,
    evaluate_nasp,
    evaluate_walk,
    log_scale,
    spread,
)
from chain_simulation.harness.cli import main

GREEDY_LIKE = {p: 1.2 * log_scale(p) for p in SCALING_GRID}
BATCH_LIKE = {p: 40.0 / p for p in SCALING_GRID}


def test_spread():
    assert spread([2.0, 4.0, 3.0]) == 2.0
    assert spread([0.0, 1.0]) == float("inf")


def test_identity():
    assert evaluate_identity([{"total_wait": 10, "mean_queue": 2.5, "horizon": 4}]).passed
    result = evaluate_identity([{"total_wait": 11, "mean_queue": 2.5, "horizon": 4}])
    assert not result.passed
    assert result.criterion == 1
    assert len(result.failures) == 1


def test_lower_bound():
    result = evaluate_lower_bound({PolicyName.GREEDY: {0.1: 5.0, 0.2: 2.0}, PolicyName.BATCH: {0.1: 400.0}})
    assert not result.passed
    assert result.failures == ["greedy at p=0.2: mean wait 2.000 < 2.250"]
    assert result.observed["batch"] == {"0.1": 400.0}


def test_greedy_scaling():
    result = evaluate_greedy_scaling(GREEDY_LIKE)
    assert result.passed
    assert result.observed["spread"] == pytest.approx(1.0)
    assert result.observed["residuals"]["one-over-p-log"] < result.observed["residuals"]["one-over-p"]

    # 40/p: the ratio drifts with ln(1/p) and the 1/p fit wins
    result = evaluate_greedy_scaling(BATCH_LIKE)
    assert not result.passed
    assert len(result.failures) == 2


def test_batch_scaling_needs_to_beat_greedy_at_the_smallest_p():
    assert evaluate_batch_scaling({p: 0.5 * GREEDY_LIKE[0.02] * 0.02 / p for p in SCALING_GRID}, GREEDY_LIKE).passed

    result = evaluate_batch_scaling(BATCH_LIKE, GREEDY_LIKE)
    assert not result.passed
    assert result.observed["spread"] == pytest.approx(1.0)
    assert result.failures[0].startswith("at p=0.02 batch waits 2000.000")


def test_greedy_batch_stays_within_twice_batch():
    counts = {p: 0 for p in SCALING_GRID}
    assert evaluate_greedy_batch({p: 1.5 * w for p, w in BATCH_LIKE.items()}, BATCH_LIKE, counts).passed

    result = evaluate_greedy_batch(GREEDY_LIKE, BATCH_LIKE, counts)
    assert not result.passed
    assert len(result.failures) == len(SCALING_GRID)
    assert result.observed["fair_path_runs"] == {"0.02": 0, "0.05": 0, "0.1": 0, "0.2": 0}


def test_clear_all_band():
    assert evaluate_clear_all({0.1: (40, 41.3), 0.05: (25, 103.7)}).passed

    result = evaluate_clear_all({0.1: (10, 200.0)})
    assert not result.passed
    assert len(result.failures) == 2
    assert result.observed["0.1"]["band"][1] == pytest.approx(5 * log_scale(0.1))


def test_nasp_phases():
    assert evaluate_nasp(30, 1210.0, 1200).passed
    assert evaluate_nasp(9, 1212.0, 1200).failures == ["only 9 phases"]
    assert len(evaluate_nasp(30, 1600.0, 1199).failures) == 2
    assert len(evaluate_nasp(0, None, None).failures) == 3


def test_multi_donor():
    assert evaluate_multi_donor({0.05: 10.0, 0.1: 5.0}, {0.05: 3.0, 0.1: 2.5}).passed
    result = evaluate_multi_donor({0.05: 5.0, 0.1: 5.0}, {0.05: 9.0, 0.1: 3.0})
    assert not result.passed
    assert len(result.failures) == 2


def test_walk_reference_point():
    report = build_walk_report(WalkRequest(M=50, K=20, rho=0.06, beta=0.2, steps=20_000))
    result = evaluate_walk([report])
    assert result.passed
    assert result.observed["points"] == 1


def test_lemma_results():
    passing = LemmaResult(lemma=LemmaName.DFS_PATH, trials=5, successes=5, frequency=1.0, threshold=1.0, passed=True)
    failing = LemmaResult(lemma=LemmaName.GNP_PATH, trials=5, successes=4, frequency=0.8, threshold=0.99, passed=False)
    assert evaluate_lemmas(LemmaReport(seed=0, results=[passing])).passed
    result = evaluate_lemmas(LemmaReport(seed=0, results=[passing, failing]))
    assert result.failures == ["gnp-path: 4/5 (frequency 0.8000)"]


def test_request_validation():
    assert AcceptanceRequest().criteria == list(range(1, 11))
    assert AcceptanceRequest(criteria=[7, 1, 7]).criteria == [1, 7]
    with pytest.raises(ValidationError):
        AcceptanceRequest(criteria=[11])


def test_experiments_are_shared_between_criteria():
    run = AcceptanceRun(AcceptanceRequest(T=200, replications=1))
    assert run.experiment(PolicyName.GREEDY, 0.2) is run.experiment(PolicyName.GREEDY, 0.2)
    assert run.experiment(PolicyName.NASP, 0.1) is run.experiment(PolicyName.NASP, 0.1, c=120.0)


def test_identity_holds_on_real_runs(tmp_path):
    report = run_acceptance(AcceptanceRequest(criteria=[1], T=400, replications=2, output_dir=tmp_path))
    assert report.passed
    assert report.results[0].observed["runs"] == 6
    saved = json.loads((tmp_path / SimulationConfig.ACCEPTANCE_FILE).read_text())
    assert saved["results"][0]["name"] == "waiting-queue-identity"


def test_short_horizon_fails_the_nasp_criterion():
    # theta = 1200 arrivals, so 500 steps never close a phase
    report = run_acceptance(AcceptanceRequest(criteria=[7], T=500, replications=1))
    assert not report.passed
    assert report.results[0].observed["phases"] == 0


def test_cli_accept(tmp_path):
    assert main(["accept", "--criterion", "1", "--T", "300", "--replications", "1", "--output", str(tmp_path)]) == 0
    assert (tmp_path / SimulationConfig.ACCEPTANCE_FILE).exists()
    assert main(["accept", "--criterion", "7", "--T", "300", "--replications", "1"]) == 1
    assert main(["accept", "--criterion", "11"]) == 2
