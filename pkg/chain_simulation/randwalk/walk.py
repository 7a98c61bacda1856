"""
Drift Random Walk

Responsible for:
- Validating (M, K, rho, beta) walk parameters
- Simulating the dominating chain Y_t
- Solving for the root of f(x) = e^-x - 1 + x/(1+beta') and the exact geometric ratio
- Building the stationary distribution and its expectation and tail bounds
"""

import logging
import math
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator
from scipy.optimize import bisect

from ..config.simulation_config import SimulationConfig
from ..errors import RegimeError
from ..metrics.summary import mean_confidence_interval

logger = logging.getLogger(__name__)

BALANCE_TOLERANCE = 1e-12
RESIDUAL_TOLERANCE = 1e-9
RESIDUAL_LEVELS = 200


class WalkParams(BaseModel):
    """
    Walk with floor M, down-jump K taken with probability rho, drift margin beta.

    rho * K must equal 1 + beta.
    """
    M: int = Field(..., ge=0, description="Floor level")
    K: float = Field(..., gt=0, description="Down-jump size")
    rho: float = Field(..., gt=0, le=1, description="Down-jump probability")
    beta: float = Field(..., gt=0, description="Drift margin")

    @model_validator(mode="after")
    def _check_balance(self) -> "WalkParams":
        if abs(self.rho * self.K - (1 + self.beta)) > BALANCE_TOLERANCE:
            raise ValueError(f"rho*K = {self.rho * self.K} must equal 1 + beta = {1 + self.beta}")
        return self

    @property
    def beta_prime(self) -> float:
        return self.beta + self.rho

    @property
    def k_prime(self) -> float:
        return self.K + 1

    @property
    def integer_jump(self) -> bool:
        return float(self.K).is_integer()


class SteadyState(BaseModel):
    """Stationary distribution s_M, s_{M+i} = c * alpha^i of the walk."""
    s_M: float
    alpha: float = Field(..., description="Exact geometric ratio used for the distribution")
    alpha_approx: float = Field(..., description="1 - x/k' from the exponential approximation")
    c: float
    x: float
    residual: Optional[float] = Field(default=None, description="Largest recurrence residual over the checked ladder")

    def level(self, params: WalkParams, level: int) -> float:
        """Stationary mass of one level."""
        if level < params.M:
            return 0.0
        if level == params.M:
            return self.s_M
        return self.c * self.alpha ** (level - params.M)

    def mean(self, params: WalkParams) -> float:
        return params.M + self.c * self.alpha / (1 - self.alpha) ** 2

    def tail(self, params: WalkParams, level: float) -> float:
        """Stationary probability that Y exceeds level."""
        if level < params.M:
            return 1.0
        j = int(math.floor(level - params.M))
        return self.c * self.alpha ** (j + 1) / (1 - self.alpha)


def _check_regime(params: WalkParams) -> None:
    if params.beta_prime >= SimulationConfig.BETA_PRIME_LIMIT:
        raise RegimeError(
            f"beta' = beta + rho = {params.beta_prime:.4f} must be below {SimulationConfig.BETA_PRIME_LIMIT:.4f}"
        )


def root_function(x: float, beta_prime: float) -> float:
    return math.exp(-x) - 1 + x / (1 + beta_prime)


def root_bracket(params: WalkParams) -> Tuple[float, float]:
    bp = params.beta_prime
    return 2 * bp / (1 + bp), 4 * bp / (1 + bp)


def solve_root(params: WalkParams) -> Tuple[float, float]:
    """
    Nonzero root of f(x) = e^-x - 1 + x/(1+beta') by bisection on
    [2 beta'/(1+beta'), 4 beta'/(1+beta')].

    Returns:
        (x, alpha) with alpha = 1 - x/k'

    Raises:
        RegimeError: beta' >= 3/5, or the bracket does not change sign
    """
    _check_regime(params)
    bp = params.beta_prime
    lower, upper = root_bracket(params)
    f_lower, f_upper = root_function(lower, bp), root_function(upper, bp)
    if not f_lower < 0 < f_upper:
        raise RegimeError(f"no sign change on [{lower:.6f}, {upper:.6f}]: f = ({f_lower:.3e}, {f_upper:.3e})")

    x = bisect(
        root_function,
        lower,
        upper,
        args=(bp,),
        xtol=1e-15,
        maxiter=SimulationConfig.ROOT_MAX_ITER,
    )
    if abs(root_function(x, bp)) > SimulationConfig.ROOT_TOLERANCE:
        raise RegimeError(f"root {x} leaves |f| = {abs(root_function(x, bp)):.3e}")
    alpha = 1 - x / params.k_prime
    if not 0 < alpha < 1:
        raise RegimeError(f"alpha = {alpha} is outside (0, 1)")
    return x, alpha


def exact_alpha(params: WalkParams) -> float:
    """
    Root in (0, 1) of alpha = (1 - rho) + rho * alpha^(K+1).

    g(alpha) = (1 - rho) + rho alpha^k' - alpha is positive at 0 and negative at
    its minimiser (1/(rho k'))^(1/K), which lies in (0, 1) because rho k' > 1.
    """
    rho, kp = params.rho, params.k_prime

    def g(a: float) -> float:
        return (1 - rho) + rho * a**kp - a

    turn = (1 / (rho * kp)) ** (1 / params.K)
    if g(turn) >= 0:
        raise RegimeError(f"no root of the balance equation below 1 for {params}")
    return bisect(g, 0.0, turn, xtol=1e-15, maxiter=SimulationConfig.ROOT_MAX_ITER)


def steady_state(params: WalkParams, levels: int = RESIDUAL_LEVELS) -> SteadyState:
    """
    Stationary distribution of the walk.

    s_{M+i} = c alpha^i (i >= 1) and s_M = rho * sum_{i=1..K} s_{M+i}, with c
    fixed by normalization. alpha is the exact ratio; the recurrence
    s_{l+1} = (1-rho) s_l + rho s_{l+K+1} is checked for `levels` levels when
    K is an integer.

    Raises:
        RegimeError: propagated from solve_root, or a residual above 1e-9
    """
    x, alpha_approx = solve_root(params)
    alpha = exact_alpha(params)
    rho, K = params.rho, params.K

    head = rho * alpha * (1 - alpha**K) / (1 - alpha)
    c = 1 / (head + alpha / (1 - alpha))
    state = SteadyState(s_M=c * head, alpha=alpha, alpha_approx=alpha_approx, c=c, x=x)

    if params.integer_jump:
        k = int(K)
        i = np.arange(1, levels + 1)
        s = c * alpha ** i
        s_next = c * alpha ** (i + 1)
        s_jump = c * alpha ** (i + k + 1)
        state.residual = float(np.max(np.abs(s_next - (1 - rho) * s - rho * s_jump)))
        if state.residual > RESIDUAL_TOLERANCE:
            raise RegimeError(f"recurrence residual {state.residual:.3e} exceeds {RESIDUAL_TOLERANCE}")

    total = state.s_M + c * alpha / (1 - alpha)
    if abs(total - 1) > RESIDUAL_TOLERANCE:
        raise RegimeError(f"stationary mass sums to {total}")
    logger.debug(f"steady state for {params}: x={x:.6f}, alpha={alpha:.6f} (approx {alpha_approx:.6f})")
    return state


def _check_bound_regime(params: WalkParams) -> None:
    if params.beta > SimulationConfig.BETA_LIMIT:
        raise RegimeError(f"beta = {params.beta} exceeds {SimulationConfig.BETA_LIMIT:.4f}")


def expected_value_bound(params: WalkParams) -> float:
    """M + K(1+beta)/beta."""
    _check_bound_regime(params)
    return params.M + params.K * (1 + params.beta) / params.beta


def tail_bound(params: WalkParams, delta: float) -> float:
    """Level exceeded with probability at most delta: M + (K(1+beta)/beta) ln(2/delta)."""
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    _check_bound_regime(params)
    return params.M + params.K * (1 + params.beta) / params.beta * math.log(2 / delta)


def approximate_mean_bound(params: WalkParams) -> float:
    """M + k'/x from the exponential approximation of the geometric ratio."""
    x, _ = solve_root(params)
    return params.M + params.k_prime / x


def simulate_walk(params: WalkParams, steps: int, seed: int) -> np.ndarray:
    """
    Simulate Y_1..Y_steps starting from Y_1 = 0.

    Below M the walk climbs by one; at M it moves to M+1; above M it drops to
    max(Y - K, M) with probability rho and otherwise climbs by one.

    Raises:
        ValueError: non-integer K or steps < 1
    """
    if not params.integer_jump:
        raise ValueError(f"simulation needs an integer jump size, got K={params.K}")
    if steps < 1:
        raise ValueError(f"steps must be positive, got {steps}")
    M, K, rho = params.M, int(params.K), params.rho
    drops = np.random.default_rng(seed).random(steps) < rho

    path = np.empty(steps, dtype=np.int64)
    y = 0
    for t in range(steps):
        path[t] = y
        if y > M and drops[t]:
            y = max(y - K, M)
        else:
            y += 1
    return path


def walk_statistics(
    trajectory: np.ndarray,
    params: WalkParams,
    deltas: Sequence[float] = (0.05, 0.2),
    burn_in: float = SimulationConfig.WALK_BURN_IN,
    batches: int = 50,
) -> Dict[str, object]:
    """
    Monte Carlo statistics over the post-burn-in part of a trajectory.

    The confidence interval uses batch means to absorb autocorrelation.
    """
    kept = trajectory[int(len(trajectory) * burn_in):]
    usable = len(kept) - len(kept) % batches
    batch_means = kept[:usable].reshape(batches, -1).mean(axis=1) if usable >= batches else kept
    mean, low, high = mean_confidence_interval(batch_means)
    stats = {
        "steps": int(len(trajectory)),
        "kept": int(len(kept)),
        "mean": float(kept.mean()),
        "mean_ci": [low, high],
        "max": int(kept.max()),
        "exceedance": {},
    }
    if params.beta <= SimulationConfig.BETA_LIMIT:
        stats["exceedance"] = {f"{d:g}": float((kept > tail_bound(params, d)).mean()) for d in deltas}
    return stats


def occupancy_distance(trajectory: np.ndarray, params: WalkParams, state: SteadyState,
                       burn_in: float = SimulationConfig.WALK_BURN_IN) -> float:
    """Total-variation distance between the empirical occupancy and the stationary law."""
    kept = trajectory[int(len(trajectory) * burn_in):]
    top = int(kept.max())
    counts = np.bincount(kept, minlength=top + 1) / len(kept)
    exact = np.array([state.level(params, level) for level in range(top + 1)])
    beyond = state.tail(params, top)
    return 0.5 * (float(np.abs(counts - exact).sum()) + beyond)
