"""
CLEAR-ALL Policy

Waits until the waiting nodes admit a Hamiltonian path reachable from the
chain end, then serves all of them at once.
"""

import logging
from typing import List, Optional

import numpy as np

from ..config.simulation_config import PolicyName
from ..errors import InvariantViolation
from ..model.state import SimState
from ..pathfind.graphs import make_digraph
from ..pathfind.search import find_hamiltonian_path
from .base import Extension, Policy

logger = logging.getLogger(__name__)


class ClearAllPolicy(Policy):
    """
    Check for a Hamiltonian path after every arrival; commit it when found.

    Args:
        rng: stream for the rotation heuristic
        budget: restart budget for instances above the exact-search limit
    """

    name = PolicyName.CLEAR_ALL

    def __init__(self, rng: np.random.Generator, budget: Optional[int] = None):
        super().__init__(rng)
        self.budget = budget
        self._last_clear = 0

    def step(self, state: SimState) -> List[Extension]:
        end = state.chains[0].end
        starts = state.out_edges.get(end)
        if not starts:
            return []
        waiting = list(state.waiting)
        graph = make_digraph(waiting, ((u, v) for u in waiting for v in state.out_edges[u]))
        path = find_hamiltonian_path(graph, starts, budget=self.budget, rng=self.rng)
        if path is None:
            return []
        self.extension_lengths.append(len(path))
        self.phase_lengths.append(state.clock - self._last_clear)
        self._last_clear = state.clock
        logger.debug(f"step {state.clock}: cleared {len(path)} waiting nodes")
        return [(0, path)]

    def check(self, state: SimState) -> None:
        if self._last_clear == state.clock and state.waiting:
            raise InvariantViolation(f"clear at step {state.clock} left {len(state.waiting)} nodes waiting")
