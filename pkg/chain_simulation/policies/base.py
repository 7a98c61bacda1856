"""
Policy Base

Shared step contract, phase bookkeeping and the oldest-first greedy walk.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, List, Set, Tuple

import numpy as np

from ..config.simulation_config import PolicyName
from ..errors import InvariantViolation
from ..model.state import SimState

Extension = Tuple[int, List[int]]


@dataclass
class PhaseState:
    """Bookkeeping for phase-based policies (Batch, NASP, Greedy-Batch)."""
    c: float
    threshold: int
    index: int = 0
    start_clock: int = 0
    new_nodes: List[int] = field(default_factory=list)
    old_nodes: Set[int] = field(default_factory=set)

    @classmethod
    def for_policy(cls, c: float, p: float) -> "PhaseState":
        return cls(c=c, threshold=math.ceil(c / p))

    def close(self, waiting: Set[int], clock: int) -> int:
        """Start the next phase; returns the number of arrivals in the closed phase."""
        length = clock - self.start_clock
        self.index += 1
        self.start_clock = clock
        self.new_nodes = []
        self.old_nodes = set(waiting)
        return length


def greedy_walk(state: SimState, end: int) -> List[int]:
    """
    Extend from end while it has a waiting out-neighbour, always taking the
    longest-waiting one.
    """
    path: List[int] = []
    taken: Set[int] = set()
    current = end
    while True:
        nxt = min((v for v in state.out_edges.get(current, ()) if v not in taken), default=None)
        if nxt is None:
            return path
        path.append(nxt)
        taken.add(nxt)
        current = nxt


def check_end_is_stuck(state: SimState, chain_id: int) -> None:
    """Greedy post-state: the chain end has no edge to any waiting node."""
    end = state.chains[chain_id].end
    if state.out_edges.get(end):
        raise InvariantViolation(f"chain {chain_id} end {end} still has waiting out-neighbours at step {state.clock}")


class Policy(ABC):
    """
    Online matching policy.

    After each arrival the runner calls step(); the returned extensions are
    committed in chain-id order within the same time step.
    """

    name: PolicyName

    def __init__(self, rng: np.random.Generator):
        self.rng = rng
        self.extension_lengths: List[int] = []
        self.phase_lengths: List[int] = []

    @abstractmethod
    def step(self, state: SimState) -> List[Extension]:
        """Observe the post-arrival state and propose extensions."""

    def check(self, state: SimState) -> None:
        """Policy-specific invariants after the step's extensions were committed."""

    def extras(self) -> Dict[str, List[int]]:
        return {
            "extension_lengths": list(self.extension_lengths),
            "phase_lengths": list(self.phase_lengths),
        }

    def _newest(self, state: SimState) -> int:
        return state.node_id(state.clock)
