"""
Tests for experiment configs, the experiment workflow, sweeps, lemma checks,
walk reports and the command-line surface.
"""

import json

import pytest
from pydantic import ValidationError

from chain_simulation.config import LemmaName, PolicyName, SimulationConfig
from chain_simulation.errors import ConfigError, InvariantViolation
from chain_simulation.harness import (
    ExperimentConfig,
    SweepConfig,
    WalkRequest,
    build_walk_report,
    fit_sweep,
    load_flat_config,
    read_sweep,
    run_experiment,
    run_sweep,
    verify_lemmas,
)
from chain_simulation.harness import sweep as sweep_module
from chain_simulation.harness.cli import main
from chain_simulation.harness.lemmas import random_m_edges


def test_experiment_defaults():
    config = ExperimentConfig(policy="batch", p=0.1)
    assert config.horizon == 100_000
    assert config.c == 12.0
    assert ExperimentConfig(policy="greedy", p=0.1).c is None
    assert ExperimentConfig(policy="greedy", p=0.1, base_seed=5).seed_for(3) == 6


def test_experiment_validation():
    with pytest.raises(ValidationError):
        ExperimentConfig(policy="greedy", p=0.0)
    with pytest.raises(ValidationError):
        ExperimentConfig(policy="greedy", p=1.0)
    with pytest.raises(ValidationError):
        ExperimentConfig(policy="greedy", p=0.1, donors=3)
    with pytest.raises(ValidationError):
        ExperimentConfig(policy="greedy", p=0.1, T=100, probe=200)
    with pytest.raises(ValidationError):
        ExperimentConfig(policy="greedy", p=0.1, colour="blue")
    assert ExperimentConfig(policy="multi-greedy", p=0.1, donors=3).donors == 3


def test_flat_config_files(tmp_path):
    good = tmp_path / "good.yaml"
    good.write_text("policy: batch\np: 0.2\nT: 300\nc: 1.0\n")
    config = ExperimentConfig.from_file(good)
    assert config.policy is PolicyName.BATCH
    assert config.horizon == 300

    grid = tmp_path / "grid.yaml"
    grid.write_text("policies: [greedy]\np_grid: [0.2, 0.3, 0.4]\n")
    assert SweepConfig.from_file(grid).p_grid == [0.2, 0.3, 0.4]

    nested = tmp_path / "nested.yaml"
    nested.write_text("policy: greedy\nextra:\n  depth: 2\n")
    with pytest.raises(ConfigError):
        load_flat_config(nested)

    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigError):
        load_flat_config(listing)

    with pytest.raises(ConfigError):
        load_flat_config(tmp_path / "missing.yaml")


def test_sweep_grid_validation():
    with pytest.raises(ValidationError):
        SweepConfig(policies=["greedy"], p_grid=[0.1, 0.2])
    with pytest.raises(ValidationError):
        SweepConfig(policies=["greedy"], p_grid=[0.1, 0.1, 0.2])


def test_experiment_outputs_are_reproducible(tmp_path):
    values = {"policy": "greedy", "p": 0.2, "T": 500, "replications": 3, "base_seed": 5}
    first = run_experiment({**values, "output_dir": tmp_path / "a"})
    second = run_experiment({**values, "output_dir": tmp_path / "b"})
    assert first.seeds == [5, 4, 7]
    assert first.aggregate == second.aggregate
    for name in (SimulationConfig.SUMMARY_FILE, SimulationConfig.PERNODE_FILE, SimulationConfig.TRACE_FILE):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    summary = json.loads((tmp_path / "a" / SimulationConfig.SUMMARY_FILE).read_text())
    assert summary["seeds"] == [5, 4, 7]
    assert "output_dir" not in summary["config"]
    assert len(summary["runs"]) == 3
    trace_header = (tmp_path / "a" / SimulationConfig.TRACE_FILE).read_text().splitlines()[0]
    assert trace_header == "replication,step,event_kind,node_id,chain_id,path_length"
    pernode_header = (tmp_path / "a" / SimulationConfig.PERNODE_FILE).read_text().splitlines()[0]
    assert pernode_header == "replication,node,wait,censored"


def test_worker_processes_do_not_change_results():
    values = {"policy": "batch", "p": 0.2, "c": 1.0, "T": 400, "replications": 3, "base_seed": 2}
    serial = run_experiment(values)
    parallel = run_experiment({**values, "workers": 2})
    assert serial.aggregate == parallel.aggregate
    assert serial.runs == parallel.runs


def test_greedy_wait_sits_above_the_universal_lower_bound():
    report = run_experiment({"policy": "greedy", "p": 0.2, "T": 4000, "base_seed": 1})
    assert report.aggregate["mean_wait"] >= 0.45 / 0.2


def test_sweep_table_and_fits(tmp_path):
    frame = run_sweep(SweepConfig(policies=["greedy"], p_grid=[0.3, 0.2, 0.4], T=800, output_dir=tmp_path))
    assert frame["p"].tolist() == [0.2, 0.3, 0.4]
    assert frame["error"].isna().all()
    assert (tmp_path / SimulationConfig.SWEEP_FILE).exists()
    fits = fit_sweep(read_sweep(tmp_path / SimulationConfig.SWEEP_FILE))
    assert set(fits["greedy"]) == {"one-over-p", "one-over-p-log"}
    assert fits["greedy"]["one-over-p"].coefficient > 0


def test_sweep_skips_clear_all_at_small_p():
    configs = sweep_module.grid_configs(SweepConfig(policies=["clear-all", "greedy"], p_grid=[0.01, 0.1, 0.2], T=100))
    assert [(c.policy.value, c.p) for c in configs] == [
        ("greedy", 0.01), ("clear-all", 0.1), ("greedy", 0.1), ("clear-all", 0.2), ("greedy", 0.2),
    ]


def test_sweep_donor_rule_applies_to_multi_greedy():
    configs = sweep_module.grid_configs(
        SweepConfig(policies=["multi-greedy", "greedy"], p_grid=[0.1, 0.2, 0.25], donor_rule="one-over-p", T=100)
    )
    assert [c.donors for c in configs] == [10, 1, 5, 1, 4, 1]


def test_sweep_records_failing_points(monkeypatch):
    real = sweep_module.run_experiment

    def flaky(experiment):
        if experiment.p == 0.3:
            raise InvariantViolation("synthetic failure")
        return real(experiment)

    monkeypatch.setattr(sweep_module, "run_experiment", flaky)
    frame = run_sweep(SweepConfig(policies=["greedy"], p_grid=[0.2, 0.3, 0.4], T=300))
    assert frame["error"].notna().tolist() == [False, True, False]
    assert "synthetic failure" in frame.loc[1, "error"]
    assert "greedy" not in fit_sweep(frame)


def test_random_m_edge_count():
    assert random_m_edges(12, 3, 0.1) == 178


def test_lemma_checks_pass():
    report = verify_lemmas(
        [LemmaName.RANDOM_M, LemmaName.DFS_PATH, LemmaName.START_NODES],
        seed=3,
    )
    assert report.passed
    assert [result.lemma for result in report.results] == [
        LemmaName.RANDOM_M, LemmaName.DFS_PATH, LemmaName.START_NODES,
    ]
    assert report.results[0].details["m"] == 178
    start_nodes = report.results[2].details
    # a start that misses the bound reaches fewer than k <= 3 vertices
    assert start_nodes["max_bad_reach"] < 3
    assert start_nodes["min_good_reach"] is not None


def test_long_path_lemmas_pass():
    report = verify_lemmas(
        [LemmaName.GNP_PATH, LemmaName.CLAIM_LONG_PATH],
        trials=3,
        seed=1,
        **{"gnp-path": {"c": 30.0, "p": 0.2}},
    )
    assert report.passed
    gnp, claim = report.results
    assert gnp.details["target"] == 150
    assert claim.threshold is None
    assert claim.details["target"] == pytest.approx(120.0)
    assert claim.passed == (claim.details["mean_length"] >= claim.details["target"])


def test_walk_report_outside_the_root_regime():
    report = build_walk_report(WalkRequest(M=0, K=2, rho=0.75, beta=0.5, steps=5000))
    assert report.expected_value_bound == pytest.approx(6.0)
    assert report.x is None
    assert report.alpha_exact is not None
    assert any(error.startswith("root") for error in report.errors)


def test_walk_report_reference_point():
    report = build_walk_report(WalkRequest(M=50, K=20, rho=0.06, beta=0.2, steps=20_000))
    assert report.expected_value_bound == pytest.approx(170.0)
    assert report.tail_bounds["0.2"] == pytest.approx(326.3, abs=0.05)
    assert report.x == pytest.approx(0.48, abs=0.005)
    assert not report.errors
    assert all(report.checks.values())


def test_cli_walk(capsys):
    code = main(["walk", "--M", "50", "--K", "20", "--rho", "0.06", "--beta", "0.2", "--steps", "20000"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload[0]["expected_value_bound"] == pytest.approx(170.0)


def test_cli_simulate_writes_outputs(tmp_path):
    code = main(["simulate", "--policy", "greedy", "--p", "0.3", "--T", "300", "--output", str(tmp_path)])
    assert code == 0
    assert (tmp_path / SimulationConfig.SUMMARY_FILE).exists()


def test_cli_rejects_invalid_configuration(tmp_path):
    assert main(["simulate", "--policy", "greedy", "--p", "1.5"]) == 2
    assert main(["walk", "--M", "10"]) == 2
    assert main(["fit", str(tmp_path / "missing.csv")]) == 2


def test_cli_sweep_then_fit(tmp_path, capsys):
    code = main(["sweep", "--policies", "greedy", "--p-grid", "0.2", "0.3", "0.4", "--T", "400", "--output", str(tmp_path)])
    assert code == 0
    capsys.readouterr()
    assert main(["fit", str(tmp_path / SimulationConfig.SWEEP_FILE)]) == 0
    fits = json.loads(capsys.readouterr().out)
    assert fits["greedy"]["one-over-p"]["points"] == 3


def test_cli_verify_lemmas(tmp_path):
    code = main(["verify-lemmas", "--lemma", "dfs-path", "--trials", "30", "--output", str(tmp_path)])
    assert code == 0
    saved = json.loads((tmp_path / SimulationConfig.LEMMAS_FILE).read_text())
    assert saved["results"][0]["lemma"] == "dfs-path"
