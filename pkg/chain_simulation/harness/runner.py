"""
Simulation Runner

Responsible for:
- Driving one seeded run: arrivals, policy steps, commits, per-step checks
- Summarizing a replication into a picklable result for worker processes
- Writing per-node and trace CSVs
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..config.simulation_config import PolicyName, SimulationConfig, TieBreak
from ..metrics.summary import RunSummary, additional_wait, compute_summary
from ..model.oracle import EdgeOracle
from ..model.state import SimState
from ..policies.base import Policy
from ..policies.registry import build_policy
from .models import ExperimentConfig

logger = logging.getLogger(__name__)


def policy_stream(seed: int) -> np.random.Generator:
    """Counter-based stream for a run's policy randomness."""
    return np.random.Generator(np.random.Philox(seed))


def simulate_run(
    policy: Union[PolicyName, str],
    p: float,
    horizon: int,
    seed: int,
    c: Optional[float] = None,
    donors: int = 1,
    tie_break: TieBreak = SimulationConfig.DEFAULT_TIE_BREAK,
    eager_edges: bool = False,
) -> Tuple[SimState, Policy]:
    """
    Run one policy for `horizon` arrivals and finalize the state.

    The edge oracle is keyed by the seed and the policy draws from a Philox
    stream on the same seed, so (policy, p, horizon, seed) fixes the run.

    Returns:
        (finalized SimState, policy instance with its extension/phase records)

    Raises:
        ChainSimulationError: an invalid commit or a violated invariant
    """
    oracle = EdgeOracle(seed, p)
    state = SimState(oracle, donors=donors, eager_size=horizon + donors if eager_edges else None)
    runner = build_policy(PolicyName(policy), p, policy_stream(seed), c=c, donors=donors, tie_break=tie_break)

    for _ in range(horizon):
        state.arrive()
        for chain_id, nodes in sorted(runner.step(state), key=lambda ext: ext[0]):
            state.extend_chain(chain_id, nodes)
        runner.check(state)
        state.end_step()

    state.finalize(horizon)
    state.check_invariants()
    logger.debug(f"{runner.name.value} run with seed {seed}: {state.serviced} of {horizon} served")
    return state, runner


@dataclass
class ReplicationResult:
    """Everything a worker hands back for one replication."""
    replication: int
    seed: int
    summary: RunSummary
    additional_wait: Optional[float]
    trace: pd.DataFrame


def run_replication(config: ExperimentConfig, replication: int) -> ReplicationResult:
    """Simulate and summarize replication r of an experiment (seed = base XOR r)."""
    seed = config.seed_for(replication)
    state, policy = simulate_run(
        config.policy,
        config.p,
        config.horizon,
        seed,
        c=config.c,
        donors=config.donors,
        tie_break=config.tie_break,
        eager_edges=config.eager_edges,
    )
    summary = compute_summary(state, config.horizon, burn_in=config.burn_in, extras=policy.extras())
    probe = config.probe if config.probe is not None else max(1, config.horizon // 2)
    trace = state.trace_frame()
    trace.insert(0, "replication", replication)
    return ReplicationResult(
        replication=replication,
        seed=seed,
        summary=summary,
        additional_wait=additional_wait(summary, probe),
        trace=trace,
    )


def write_pernode(results: Sequence[ReplicationResult], path: Union[str, Path]) -> Path:
    """Per-node waiting times of every replication, in replication order."""
    frames = []
    for result in results:
        frame = result.summary.pernode_frame()
        frame.insert(0, "replication", result.replication)
        frames.append(frame)
    path = Path(path)
    pd.concat(frames, ignore_index=True).to_csv(path, index=False)
    return path


def write_trace(results: Sequence[ReplicationResult], path: Union[str, Path]) -> Path:
    path = Path(path)
    pd.concat([result.trace for result in results], ignore_index=True).to_csv(path, index=False)
    return path
