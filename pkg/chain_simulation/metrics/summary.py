"""
Run Summaries

Responsible for:
- Turning a finalized run into per-node waiting times and a queue trace
- Checking that total waiting equals total queue occupancy
- Censored/uncensored and burn-in trimmed means
- Nearest-rank tail quantiles and the additional-waiting-time probe
- Replication means with t-based confidence intervals
"""

import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field
from scipy import stats

from ..config.simulation_config import SimulationConfig
from ..errors import InvariantViolation, UnfinalizedTraceError
from ..model.state import SimState

logger = logging.getLogger(__name__)


class RunSummary(BaseModel):
    """Aggregate statistics of one finalized run."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    horizon: int = Field(..., description="Number of arrivals T")
    waits: np.ndarray = Field(..., repr=False, description="w_t = a_t - t for t = 1..T")
    censored: np.ndarray = Field(..., repr=False, description="True where the node was still waiting at T")
    queue: np.ndarray = Field(..., repr=False, description="q_tau for tau = 1..T")
    total_wait: int
    mean_wait: float
    mean_wait_uncensored: Optional[float] = Field(default=None, description="Mean over matched nodes only")
    mean_wait_trimmed: float = Field(..., description="Mean wait after discarding the burn-in prefix")
    median_wait: float
    quantiles: Dict[str, float] = Field(default_factory=dict)
    mean_queue: float
    mean_queue_trimmed: float
    matched: int
    unmatched: int
    extras: Dict[str, List[int]] = Field(default_factory=dict)

    def scalars(self) -> Dict[str, object]:
        """JSON-friendly scalar view; arrays dropped, policy lists reduced to count and mean."""
        data = self.model_dump(exclude={"waits", "censored", "queue", "extras"})
        data["extras"] = {
            key: {"count": len(values), "mean": float(np.mean(values)) if values else None}
            for key, values in sorted(self.extras.items())
        }
        return data

    def pernode_frame(self) -> pd.DataFrame:
        """Per-node waiting times, one row per patient."""
        return pd.DataFrame(
            {
                "node": np.arange(1, self.horizon + 1),
                "wait": self.waits,
                "censored": self.censored,
            }
        )


def queue_from_waits(arrivals: np.ndarray, services: np.ndarray, horizon: int) -> np.ndarray:
    """
    q_tau = #{t : t <= tau < a_t} for tau = 1..T, counted with a difference array.
    """
    delta = np.zeros(horizon + 2, dtype=np.int64)
    np.add.at(delta, arrivals, 1)
    np.add.at(delta, services, -1)
    return np.cumsum(delta)[1 : horizon + 1]


def compute_summary(
    state: SimState,
    horizon: int,
    burn_in: float = SimulationConfig.HARNESS_BURN_IN,
    quantile_deltas: Sequence[float] = (0.5, 0.1, 0.05, 0.01),
    extras: Optional[Dict[str, List[int]]] = None,
) -> RunSummary:
    """
    Summarize a finalized run.

    Args:
        state: SimState after finalize(horizon)
        horizon: number of arrivals T
        burn_in: fraction of the horizon excluded from the trimmed means
        quantile_deltas: tail levels reported as w quantiles
        extras: policy-specific lists (phase lengths, extension lengths)

    Returns:
        RunSummary

    Raises:
        UnfinalizedTraceError: a service time is missing
        InvariantViolation: total waiting differs from total queue occupancy
    """
    arrivals, services = state.patient_times()
    if not state.finalized or (services < 0).any():
        raise UnfinalizedTraceError("summary requested before every node has a service time")
    if len(arrivals) != horizon:
        raise UnfinalizedTraceError(f"expected {horizon} arrivals, trace holds {len(arrivals)}")

    waits = services - arrivals
    censored = np.array([r.chain_id is None for r in state.records[state.donors:]], dtype=bool)
    queue = queue_from_waits(arrivals, services, horizon)

    total_wait = int(waits.sum())
    if total_wait != int(queue.sum()):
        raise InvariantViolation(f"sum of waits {total_wait} != sum of queue sizes {int(queue.sum())}")

    # raw per-step trace recorded by the state; q_T is zero under the finalize convention
    raw = np.asarray(state.queue_trace, dtype=np.int64)
    if len(raw) == horizon and not np.array_equal(raw[:-1], queue[:-1]):
        raise InvariantViolation("queue trace recorded during the run disagrees with the recount")

    start = int(math.floor(burn_in * horizon))
    matched = ~censored
    summary = RunSummary(
        horizon=horizon,
        waits=waits,
        censored=censored,
        queue=queue,
        total_wait=total_wait,
        mean_wait=total_wait / horizon,
        mean_wait_uncensored=float(waits[matched].mean()) if matched.any() else None,
        mean_wait_trimmed=float(waits[start:].mean()) if start < horizon else float("nan"),
        median_wait=float(np.median(waits)),
        quantiles={f"{1 - d:g}": float(nearest_rank(waits, d)) for d in quantile_deltas},
        mean_queue=float(queue.mean()),
        mean_queue_trimmed=float(queue[start:].mean()) if start < horizon else float("nan"),
        matched=int(matched.sum()),
        unmatched=int(censored.sum()),
        extras=dict(extras or {}),
    )
    logger.debug(f"summary: T={horizon}, mean wait {summary.mean_wait:.3f}, unmatched {summary.unmatched}")
    return summary


def nearest_rank(values: np.ndarray, delta: float) -> float:
    """(1 - delta) nearest-rank order statistic: rank min(N, floor((1 - delta) N) + 1)."""
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    n = len(values)
    if n == 0:
        raise ValueError("no values to take a quantile of")
    rank = min(n, int(math.floor((1.0 - delta) * n)) + 1)
    return float(np.sort(values)[rank - 1])


def per_node_tail(summary: RunSummary, delta: float) -> float:
    """Empirical (1 - delta) quantile of the per-node waiting times."""
    return nearest_rank(summary.waits, delta)


def additional_wait(summary: RunSummary, probe: int) -> Optional[float]:
    """
    Mean remaining wait a_t - probe over the nodes still waiting at the probe time.

    Returns None when nobody is waiting at the probe.
    """
    if not 1 <= probe <= summary.horizon:
        raise ValueError(f"probe time must lie in [1, {summary.horizon}], got {probe}")
    arrivals = np.arange(1, summary.horizon + 1)
    services = arrivals + summary.waits
    waiting = (arrivals <= probe) & (services > probe)
    if not waiting.any():
        return None
    return float((services[waiting] - probe).mean())


def mean_confidence_interval(values: Sequence[float], confidence: float = 0.95) -> Tuple[float, float, float]:
    """
    Sample mean with a Student-t confidence interval.

    Returns:
        (mean, low, high); low == high == mean for a single value
    """
    data = np.asarray(values, dtype=float)
    if data.size == 0:
        raise ValueError("no values to average")
    mean = float(data.mean())
    if data.size == 1:
        return mean, mean, mean
    half = float(stats.t.ppf(0.5 + confidence / 2, data.size - 1) * stats.sem(data))
    return mean, mean - half, mean + half


def aggregate_summaries(summaries: Sequence[RunSummary]) -> Dict[str, object]:
    """Replication-level aggregate of the scalar statistics."""
    if not summaries:
        raise ValueError("no summaries to aggregate")
    mean, low, high = mean_confidence_interval([s.mean_wait for s in summaries])
    trimmed = [s.mean_wait_trimmed for s in summaries]
    phase_lengths = [x for s in summaries for x in s.extras.get("phase_lengths", [])]
    extension_lengths = [x for s in summaries for x in s.extras.get("extension_lengths", [])]
    return {
        "replications": len(summaries),
        "mean_wait": mean,
        "mean_wait_ci": [low, high],
        "mean_wait_trimmed": float(np.mean(trimmed)),
        "mean_queue": float(np.mean([s.mean_queue for s in summaries])),
        "median_wait": float(np.mean([s.median_wait for s in summaries])),
        "quantiles": {
            key: float(np.mean([s.quantiles[key] for s in summaries])) for key in summaries[0].quantiles
        },
        "unmatched": int(sum(s.unmatched for s in summaries)),
        "mean_phase_length": float(np.mean(phase_lengths)) if phase_lengths else None,
        "phases": len(phase_lengths),
        "mean_extension_length": float(np.mean(extension_lengths)) if extension_lengths else None,
        "min_extension_length": int(min(extension_lengths)) if extension_lengths else None,
    }
