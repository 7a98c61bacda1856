"""Online chain-extension policies."""

from .base import Extension, PhaseState, Policy, check_end_is_stuck, greedy_walk
from .batch import BatchPolicy
from .clear_all import ClearAllPolicy
from .greedy import GreedyPolicy, MultiGreedyPolicy
from .greedy_batch import GreedyBatchPolicy
from .nasp import NaspPolicy
from .registry import build_policy

__all__ = [
    "Extension",
    "PhaseState",
    "Policy",
    "check_end_is_stuck",
    "greedy_walk",
    "BatchPolicy",
    "ClearAllPolicy",
    "GreedyPolicy",
    "MultiGreedyPolicy",
    "GreedyBatchPolicy",
    "NaspPolicy",
    "build_policy",
]
