"""
Policy Registry

Maps a PolicyName from the experiment configuration to a policy instance.
"""

from typing import Optional

import numpy as np

from ..config.simulation_config import PolicyName, SimulationConfig, TieBreak
from ..errors import ConfigError
from .base import Policy
from .batch import BatchPolicy
from .clear_all import ClearAllPolicy
from .greedy import GreedyPolicy, MultiGreedyPolicy
from .greedy_batch import GreedyBatchPolicy
from .nasp import NaspPolicy


def build_policy(
    name: PolicyName,
    p: float,
    rng: np.random.Generator,
    c: Optional[float] = None,
    donors: int = 1,
    tie_break: TieBreak = SimulationConfig.DEFAULT_TIE_BREAK,
) -> Policy:
    """
    Create a fresh policy instance for one run.

    Args:
        name: policy to build
        p: edge probability
        rng: the run's policy stream
        c: phase parameter for Batch, NASP and Greedy-Batch (defaults per policy)
        donors: number of chains; only multi-greedy accepts more than one
        tie_break: chain choice for multi-greedy

    Raises:
        ConfigError: unknown policy, or several donors for a single-chain policy
    """
    name = PolicyName(name)
    if donors > 1 and name is not PolicyName.MULTI_GREEDY:
        raise ConfigError(f"policy {name.value} runs a single chain, got donors={donors}")
    if c is None:
        c = SimulationConfig.default_c(name)

    if name is PolicyName.GREEDY:
        return GreedyPolicy(rng)
    if name is PolicyName.MULTI_GREEDY:
        return MultiGreedyPolicy(rng, tie_break=tie_break)
    if name is PolicyName.CLEAR_ALL:
        return ClearAllPolicy(rng)
    if name is PolicyName.BATCH:
        return BatchPolicy(rng, c, p)
    if name is PolicyName.NASP:
        return NaspPolicy(rng, c, p)
    if name is PolicyName.GREEDY_BATCH:
        return GreedyBatchPolicy(rng, c, p)
    raise ConfigError(f"unknown policy {name}")
