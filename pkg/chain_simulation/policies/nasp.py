"""
NASP Policy

Not-A-Short-Path: phases of random length, each closed by an extension of at
least theta = ceil(c/p) nodes.
"""

import logging
from typing import List

import numpy as np

from ..config.simulation_config import PolicyName
from ..errors import InvariantViolation
from ..model.state import SimState
from ..pathfind.fair_path import fair_path_extension
from .base import Extension, PhaseState, Policy

logger = logging.getLogger(__name__)


class NaspPolicy(Policy):
    """
    After every arrival, rebuild the FAIR-PATH graph over the phase's old and
    new nodes (new-to-new edges included) and commit the DFS-LP extension once
    it reaches theta nodes. Random choices are redrawn on every rebuild.

    Args:
        rng: stream for the FAIR-PATH random choices
        c: threshold parameter; theta = ceil(c/p)
        p: edge probability
    """

    name = PolicyName.NASP

    def __init__(self, rng: np.random.Generator, c: float, p: float):
        super().__init__(rng)
        self.phase = PhaseState.for_policy(c, p)

    @property
    def threshold(self) -> int:
        return self.phase.threshold

    def step(self, state: SimState) -> List[Extension]:
        phase = self.phase
        phase.new_nodes.append(self._newest(state))
        # every node on an extension is a new arrival or a label between two of them
        reachable = len(phase.new_nodes) + min(len(phase.old_nodes), len(phase.new_nodes) - 1)
        if reachable < phase.threshold:
            return []

        extension = fair_path_extension(
            phase.old_nodes, phase.new_nodes, state.chains[0].end, state, self.rng, include_direct=True
        )
        if len(extension) < phase.threshold:
            return []

        remaining = (phase.old_nodes | set(phase.new_nodes)).difference(extension)
        self.phase_lengths.append(phase.close(remaining, state.clock))
        self.extension_lengths.append(len(extension))
        logger.debug(f"phase {phase.index} closed at step {state.clock} with extension of {len(extension)}")
        return [(0, extension)]

    def check(self, state: SimState) -> None:
        if self.phase.start_clock == state.clock and self.extension_lengths[-1] < self.threshold:
            raise InvariantViolation(f"NASP extension of {self.extension_lengths[-1]} is below theta={self.threshold}")
