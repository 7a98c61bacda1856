"""
Parameter Sweeps

Runs every (p, policy) grid point as its own experiment, tabulates the
aggregates and fits the waiting-time scaling laws.
"""

import logging
from pathlib import Path
from typing import Dict, List, Union

import pandas as pd

from ..config.simulation_config import PolicyName, ScalingModel, SimulationConfig
from ..errors import ChainSimulationError
from ..metrics.scaling import ScalingFit, fit_scaling
from .models import ExperimentConfig, SweepConfig
from .workflow import run_experiment

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = [
    "p", "policy", "c", "donors", "T", "replications",
    "mean_wait", "ci_low", "ci_high", "mean_wait_trimmed", "median_wait",
    "q0.9", "q0.95", "q0.99", "mean_queue", "unmatched",
    "phases", "mean_phase_length", "mean_extension_length", "min_extension_length",
    "error",
]


def grid_configs(config: SweepConfig) -> List[ExperimentConfig]:
    """One ExperimentConfig per (p, policy), p ascending then policy order; CLEAR-ALL skips p below its floor."""
    configs = []
    for p in sorted(config.p_grid):
        for policy in config.policies:
            if policy is PolicyName.CLEAR_ALL and p < SimulationConfig.CLEAR_ALL_MIN_P:
                logger.warning(f"Skipping clear-all at p={p}: below {SimulationConfig.CLEAR_ALL_MIN_P}")
                continue
            donors = (
                SimulationConfig.donor_count(config.donor_rule, p, config.donors)
                if policy is PolicyName.MULTI_GREEDY
                else 1
            )
            configs.append(
                ExperimentConfig(
                    policy=policy,
                    p=p,
                    c=config.c if policy in SimulationConfig.DEFAULT_C else None,
                    donors=donors,
                    tie_break=config.tie_break,
                    T=config.T,
                    replications=config.replications,
                    base_seed=config.base_seed,
                    burn_in=config.burn_in,
                    workers=config.workers,
                )
            )
    return configs


def _row(experiment: ExperimentConfig) -> Dict[str, object]:
    return {
        "p": experiment.p,
        "policy": experiment.policy.value,
        "c": experiment.c,
        "donors": experiment.donors,
        "T": experiment.horizon,
        "replications": experiment.replications,
    }


def run_sweep(config: SweepConfig) -> pd.DataFrame:
    """
    Run the grid and return one aggregate row per (p, policy).

    A failing grid point records its error in the `error` column and the
    sweep moves on. The table is written to sweep.csv when output_dir is set.
    """
    rows = []
    for experiment in grid_configs(config):
        row = _row(experiment)
        try:
            aggregate = run_experiment(experiment).aggregate
            quantiles = aggregate["quantiles"]
            row.update(
                mean_wait=aggregate["mean_wait"],
                ci_low=aggregate["mean_wait_ci"][0],
                ci_high=aggregate["mean_wait_ci"][1],
                mean_wait_trimmed=aggregate["mean_wait_trimmed"],
                median_wait=aggregate["median_wait"],
                mean_queue=aggregate["mean_queue"],
                unmatched=aggregate["unmatched"],
                phases=aggregate["phases"],
                mean_phase_length=aggregate["mean_phase_length"],
                mean_extension_length=aggregate["mean_extension_length"],
                min_extension_length=aggregate["min_extension_length"],
                **{f"q{key}": quantiles.get(key) for key in ("0.9", "0.95", "0.99")},
            )
        except ChainSimulationError as e:
            logger.error(f"Grid point {experiment.policy.value} at p={experiment.p} failed: {e}")
            row["error"] = f"{type(e).__name__}: {e}"
        rows.append(row)

    frame = pd.DataFrame(rows).reindex(columns=SWEEP_COLUMNS)
    if config.output_dir is not None:
        config.output_dir.mkdir(parents=True, exist_ok=True)
        path = config.output_dir / SimulationConfig.SWEEP_FILE
        frame.to_csv(path, index=False)
        logger.info(f"Sweep table written to {path}")
    return frame


def read_sweep(path: Union[str, Path]) -> pd.DataFrame:
    return pd.read_csv(Path(path))


def fit_sweep(frame: pd.DataFrame) -> Dict[str, Dict[str, ScalingFit]]:
    """
    Fit both scaling models per policy over the successful rows.

    Policies with fewer than three usable grid points are left out.
    """
    fits: Dict[str, Dict[str, ScalingFit]] = {}
    usable = frame[frame["error"].isna() & frame["mean_wait"].notna()] if "error" in frame else frame
    for policy, group in usable.groupby("policy", sort=True):
        if group["p"].nunique() < 3:
            logger.warning(f"Policy {policy} has fewer than 3 grid points; no fit")
            continue
        points = list(zip(group["p"], group["mean_wait"]))
        fits[policy] = {model.value: fit_scaling(points, model) for model in ScalingModel}
    return fits
