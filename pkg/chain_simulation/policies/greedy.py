"""
Greedy Policies

Greedy longest-waiting-first for one chain, and its multi-donor variant.
"""

from typing import List

import numpy as np

from ..config.simulation_config import PolicyName, TieBreak
from ..model.state import SimState
from .base import Extension, Policy, check_end_is_stuck, greedy_walk


class GreedyPolicy(Policy):
    """Extend at the first opportunity, always choosing the oldest waiting node."""

    name = PolicyName.GREEDY

    def step(self, state: SimState) -> List[Extension]:
        path = greedy_walk(state, state.chains[0].end)
        if not path:
            return []
        self.extension_lengths.append(len(path))
        return [(0, path)]

    def check(self, state: SimState) -> None:
        check_end_is_stuck(state, 0)


class MultiGreedyPolicy(Policy):
    """
    Greedy over R disjoint chains.

    An arrival that some chain end points to goes to the lowest-indexed such
    chain (or a uniformly random one), which then continues greedily.
    """

    name = PolicyName.MULTI_GREEDY

    def __init__(self, rng: np.random.Generator, tie_break: TieBreak = TieBreak.LOWEST_INDEX):
        super().__init__(rng)
        self.tie_break = tie_break

    def step(self, state: SimState) -> List[Extension]:
        x = self._newest(state)
        hits = [chain.chain_id for chain in state.chains if state.has_edge(chain.end, x)]
        if not hits:
            return []
        if self.tie_break is TieBreak.RANDOM and len(hits) > 1:
            chain_id = hits[int(self.rng.integers(len(hits)))]
        else:
            chain_id = hits[0]
        path = greedy_walk(state, state.chains[chain_id].end)
        self.extension_lengths.append(len(path))
        return [(chain_id, path)]

    def check(self, state: SimState) -> None:
        for chain in state.chains:
            check_end_is_stuck(state, chain.chain_id)
