"""
Walk Report

Bounds, roots, stationary statistics and Monte Carlo estimates for one set
of walk parameters, as served by the `walk` subcommand and the HTTP API.
"""

import logging
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from ..errors import RegimeError
from ..randwalk.walk import (
    WalkParams,
    approximate_mean_bound,
    exact_alpha,
    expected_value_bound,
    occupancy_distance,
    root_bracket,
    simulate_walk,
    steady_state,
    tail_bound,
    walk_statistics,
)
from .models import WalkRequest

logger = logging.getLogger(__name__)

# five valid points, the first being the reference point of the bounds
WALK_GRID = [
    (50, 20, 0.06, 0.2),
    (0, 10, 0.12, 0.2),
    (10, 5, 0.26, 0.3),
    (20, 8, 0.15, 0.2),
    (5, 25, 0.05, 0.25),
]


class WalkReport(BaseModel):
    """Everything computed for one parameter set."""
    params: Dict[str, float]
    beta_prime: float
    expected_value_bound: Optional[float] = None
    tail_bounds: Dict[str, float] = Field(default_factory=dict)
    bracket: List[float] = Field(default_factory=list)
    x: Optional[float] = None
    alpha_approx: Optional[float] = None
    alpha_exact: Optional[float] = None
    approximate_mean_bound: Optional[float] = None
    stationary_mean: Optional[float] = None
    stationary_tail: Dict[str, float] = Field(default_factory=dict)
    recurrence_residual: Optional[float] = None
    monte_carlo: Dict[str, Any] = Field(default_factory=dict)
    occupancy_tv: Optional[float] = None
    checks: Dict[str, bool] = Field(default_factory=dict)
    errors: List[str] = Field(default_factory=list)


def build_walk_report(request: WalkRequest) -> WalkReport:
    """
    Compute the walk report; regime errors are recorded rather than raised so
    the bounds that do apply are still reported.
    """
    params = WalkParams(M=request.M, K=request.K, rho=request.rho, beta=request.beta)
    report = WalkReport(
        params={"M": params.M, "K": params.K, "rho": params.rho, "beta": params.beta},
        beta_prime=params.beta_prime,
        bracket=list(root_bracket(params)),
    )

    try:
        report.expected_value_bound = expected_value_bound(params)
        report.tail_bounds = {f"{d:g}": tail_bound(params, d) for d in request.deltas}
    except RegimeError as e:
        report.errors.append(f"bounds: {e}")

    steady = None
    try:
        steady = steady_state(params)
        report.x = steady.x
        report.alpha_approx = steady.alpha_approx
        report.alpha_exact = steady.alpha
        report.approximate_mean_bound = approximate_mean_bound(params)
        report.stationary_mean = steady.mean(params)
        report.recurrence_residual = steady.residual
        report.stationary_tail = {key: steady.tail(params, level) for key, level in report.tail_bounds.items()}
    except RegimeError as e:
        report.errors.append(f"root: {e}")
        report.alpha_exact = exact_alpha(params)

    if params.integer_jump:
        trajectory = simulate_walk(params, request.steps, request.seed)
        report.monte_carlo = walk_statistics(trajectory, params, deltas=request.deltas)
        if steady is not None:
            report.occupancy_tv = occupancy_distance(trajectory, params, steady)
        if report.expected_value_bound is not None:
            report.checks["mean_below_bound"] = report.monte_carlo["mean"] <= report.expected_value_bound
        for key, frequency in report.monte_carlo["exceedance"].items():
            report.checks[f"tail_{key}"] = frequency <= float(key)
    else:
        report.errors.append(f"simulation: K={params.K} is not an integer")

    logger.info(f"Walk {report.params}: bound {report.expected_value_bound}, errors {len(report.errors)}")
    return report


def build_grid_report(steps: int, seed: int = 0, deltas: Optional[List[float]] = None) -> List[WalkReport]:
    """Reports for every point of WALK_GRID."""
    deltas = deltas or [0.05, 0.2]
    return [
        build_walk_report(WalkRequest(M=M, K=K, rho=rho, beta=beta, steps=steps, seed=seed, deltas=deltas))
        for M, K, rho, beta in WALK_GRID
    ]
