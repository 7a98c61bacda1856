"""
Batch Policy

Waits for ceil(c/p) arrivals, then extends the chain once with FAIR-PATH.
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


class BatchPolicy(Policy):
    """
    Fixed-length phases closed by one FAIR-PATH extension (possibly empty).

    Args:
        rng: stream for the FAIR-PATH random choices
        c: phase parameter; a phase collects ceil(c/p) arrivals
        p: edge probability
    """

    name = PolicyName.BATCH

    def __init__(self, rng: np.random.Generator, c: float, p: float):
        super().__init__(rng)
        self.phase = PhaseState.for_policy(c, p)

    def step(self, state: SimState) -> List[Extension]:
        phase = self.phase
        phase.new_nodes.append(self._newest(state))
        if len(phase.new_nodes) < phase.threshold:
            return []

        extension = fair_path_extension(phase.old_nodes, phase.new_nodes, state.chains[0].end, state, self.rng)
        remaining = (phase.old_nodes | set(phase.new_nodes)).difference(extension)
        self.phase_lengths.append(phase.close(remaining, state.clock))
        self.extension_lengths.append(len(extension))
        logger.debug(f"phase {phase.index} closed at step {state.clock} with extension of {len(extension)}")
        return [(0, extension)] if extension else []

    def check(self, state: SimState) -> None:
        if state.clock % self.phase.threshold == 0 and self.phase.start_clock != state.clock:
            raise InvariantViolation(f"batch phase did not close at step {state.clock}")
