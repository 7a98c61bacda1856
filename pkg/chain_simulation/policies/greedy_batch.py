"""
Greedy-Batch Policy

Runs Greedy while the phase is young and FAIR-PATH once it has collected
ceil(c/p) unmatched arrivals. Only an arrival the chain end points to can
trigger either.
"""

import logging
from typing import Dict, List

import numpy as np

from ..config.simulation_config import PolicyName
from ..errors import InvariantViolation
from ..model.state import EventKind, SimState
from ..pathfind.fair_path import fair_path_extension
from .base import Extension, PhaseState, Policy, check_end_is_stuck, greedy_walk

logger = logging.getLogger(__name__)


class GreedyBatchPolicy(Policy):
    """
    Args:
        rng: stream for the FAIR-PATH random choices
        c: phase parameter; FAIR-PATH runs once the phase holds ceil(c/p) nodes
        p: edge probability
    """

    name = PolicyName.GREEDY_BATCH

    def __init__(self, rng: np.random.Generator, c: float, p: float):
        super().__init__(rng)
        self.phase = PhaseState.for_policy(c, p)
        self.greedy_lengths: List[int] = []
        self.fair_path_lengths: List[int] = []
        self._ran_greedy = False
        self._triggered = False

    def step(self, state: SimState) -> List[Extension]:
        phase = self.phase
        x = self._newest(state)
        end = state.chains[0].end
        self._ran_greedy = False
        self._triggered = state.has_edge(end, x)

        filled = len(phase.new_nodes)
        phase.new_nodes.append(x)
        if not self._triggered:
            return []

        if filled < phase.threshold:
            path = greedy_walk(state, end)
            matched = set(path)
            phase.new_nodes = [v for v in phase.new_nodes if v not in matched]
            phase.old_nodes.difference_update(matched)
            self.greedy_lengths.append(len(path))
            self._ran_greedy = True
            self.extension_lengths.append(len(path))
            return [(0, path)]

        extension = fair_path_extension(phase.old_nodes, phase.new_nodes, end, state, self.rng)
        remaining = (phase.old_nodes | set(phase.new_nodes)).difference(extension)
        self.phase_lengths.append(phase.close(remaining, state.clock))
        self.fair_path_lengths.append(len(extension))
        self.extension_lengths.append(len(extension))
        logger.debug(f"phase {phase.index} closed at step {state.clock} with extension of {len(extension)}")
        return [(0, extension)]

    def check(self, state: SimState) -> None:
        if self._ran_greedy:
            check_end_is_stuck(state, 0)
        last = state.trace[-1]
        if self._triggered and not (last.event_kind is EventKind.EXTENSION and last.step == state.clock):
            raise InvariantViolation(f"arrival at step {state.clock} had an edge from the end but nothing was matched")

    def extras(self) -> Dict[str, List[int]]:
        extras = super().extras()
        extras["greedy_extension_lengths"] = list(self.greedy_lengths)
        extras["fair_path_extension_lengths"] = list(self.fair_path_lengths)
        return extras
