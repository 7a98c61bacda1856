"""
Simulation State

Responsible for:
- Owning every node record, the waiting set Q and the R donor chains
- Materializing the edges a policy may consult when a node arrives
- Committing chain extensions after checking them against the oracle
- Recording the event trace and the per-step queue size
- Finalizing unserved nodes at the horizon
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Collection, Dict, List, Optional, Sequence, Set, Tuple, Union

import numpy as np
import pandas as pd

from ..errors import DoubleServiceError, InvalidPathError, InvariantViolation
from .oracle import EagerEdgeCache, EdgeOracle

logger = logging.getLogger(__name__)


class EventKind(str, Enum):
    """Kinds of trace events."""
    ARRIVAL = "arrival"
    EXTENSION = "extension"


@dataclass(slots=True)
class NodeRecord:
    """One patient-donor pair (or an altruistic donor when is_donor is set)."""
    node_id: int
    arrival_time: int
    service_time: Optional[int] = None
    chain_id: Optional[int] = None
    is_donor: bool = False


@dataclass(slots=True)
class ChainState:
    """A donation chain starting at an altruistic donor."""
    chain_id: int
    path: List[int] = field(default_factory=list)

    @property
    def end(self) -> int:
        return self.path[-1]


@dataclass(frozen=True, slots=True)
class TraceEvent:
    """One arrival or one committed extension."""
    step: int
    event_kind: EventKind
    node_id: int
    chain_id: Optional[int]
    path_length: int
    path: Tuple[int, ...] = ()


class SimState:
    """
    Graph state of one simulation run.

    Node ids: donors take 0..R-1; the patient arriving at time t takes
    t + R - 1, so with a single donor the id equals the arrival time.

    Only edges a policy can use are materialized: edges among waiting nodes
    and edges from chain ends into waiting nodes.

    Args:
        oracle: pairwise edge oracle
        donors: number of altruistic donors R
        eager_size: if set, precompute the adjacency of the first eager_size ids
    """

    def __init__(self, oracle: EdgeOracle, donors: int = 1, eager_size: Optional[int] = None):
        if donors < 1:
            raise ValueError(f"at least one donor is required, got {donors}")
        self.oracle = oracle
        self.p = oracle.p
        self.donors = donors
        self._edges: Union[EdgeOracle, EagerEdgeCache] = (
            EagerEdgeCache(oracle, eager_size) if eager_size else oracle
        )

        self.clock = 0
        self.records: List[NodeRecord] = []
        self.waiting: Dict[int, None] = {}
        self.chains: List[ChainState] = []
        self.out_edges: Dict[int, Set[int]] = {}
        self.in_edges: Dict[int, Set[int]] = {}
        self.trace: List[TraceEvent] = []
        self.queue_trace: List[int] = []
        self.serviced = 0
        self.finalized = False

        for r in range(donors):
            self.records.append(NodeRecord(node_id=r, arrival_time=0, service_time=0, chain_id=r, is_donor=True))
            self.chains.append(ChainState(chain_id=r, path=[r]))
            self.out_edges[r] = set()

    # ------------------------------------------------------------------ ids

    def node_id(self, arrival_time: int) -> int:
        """Id of the patient that arrived at the given time."""
        return arrival_time + self.donors - 1

    def arrival_time(self, node_id: int) -> int:
        return self.records[node_id].arrival_time

    @property
    def ends(self) -> List[int]:
        return [chain.end for chain in self.chains]

    # -------------------------------------------------------------- arrival

    def arrive(self) -> int:
        """
        Advance the clock and add the arriving node to Q.

        Returns:
            Id of the new node
        """
        self.clock += 1
        x = self.node_id(self.clock)
        self.records.append(NodeRecord(node_id=x, arrival_time=self.clock))

        waiting = np.fromiter(self.waiting, dtype=np.int64, count=len(self.waiting))
        ends = np.asarray(self.ends, dtype=np.int64)

        sources = set(waiting[self._edges.predecessors_mask(waiting, x)].tolist())
        sources.update(ends[self._edges.predecessors_mask(ends, x)].tolist())
        targets = set(waiting[self._edges.successors_mask(x, waiting)].tolist())

        for s in sources:
            self.out_edges[s].add(x)
        for t in targets:
            self.in_edges[t].add(x)
        self.in_edges[x] = sources
        self.out_edges[x] = targets
        self.waiting[x] = None

        self.trace.append(TraceEvent(self.clock, EventKind.ARRIVAL, x, None, 0))
        return x

    # ------------------------------------------------------------ edge view

    def has_edge(self, u: int, v: int) -> bool:
        """Materialized edge u -> v, v waiting."""
        return v in self.out_edges.get(u, ())

    def successors_among(self, u: int, candidates: Collection[int]) -> List[int]:
        """Sorted waiting out-neighbours of u inside candidates."""
        return sorted(v for v in self.out_edges.get(u, ()) if v in candidates)

    def predecessors_among(self, v: int, candidates: Collection[int]) -> List[int]:
        """Sorted in-neighbours of the waiting node v inside candidates."""
        return sorted(u for u in self.in_edges.get(v, ()) if u in candidates)

    def waiting_successors(self, u: int) -> List[int]:
        """Waiting out-neighbours of u, oldest first."""
        return sorted(self.out_edges.get(u, ()))

    # ------------------------------------------------------------ extension

    def extend_chain(self, chain_id: int, nodes: Sequence[int]) -> None:
        """
        Append waiting nodes to a chain, servicing them at the current clock.

        Args:
            chain_id: chain to extend
            nodes: directed path starting at an out-neighbour of the chain end

        Raises:
            InvalidPathError: empty extension or a missing oracle edge
            DoubleServiceError: an element is not waiting (or repeats)
        """
        if not nodes:
            raise InvalidPathError(f"empty extension for chain {chain_id}")
        chain = self.chains[chain_id]

        prev = chain.end
        seen: Set[int] = set()
        for v in nodes:
            if v not in self.waiting or v in seen:
                raise DoubleServiceError(f"node {v} is not waiting (chain {chain_id}, step {self.clock})")
            if not self.oracle.edge_exists(prev, v):
                raise InvalidPathError(f"no edge {prev} -> {v} (chain {chain_id}, step {self.clock})")
            seen.add(v)
            prev = v

        self._drop_outgoing(chain.end)
        last = nodes[-1]
        for v in nodes:
            del self.waiting[v]
            record = self.records[v]
            record.service_time = self.clock
            record.chain_id = chain_id
            chain.path.append(v)
            for s in self.in_edges.pop(v, ()):
                if s in self.out_edges:
                    self.out_edges[s].discard(v)
            if v != last:
                self._drop_outgoing(v)
        self.serviced += len(nodes)

        self.trace.append(TraceEvent(self.clock, EventKind.EXTENSION, nodes[0], chain_id, len(nodes), tuple(nodes)))
        logger.debug(f"step {self.clock}: chain {chain_id} extended by {len(nodes)} nodes")

    def _drop_outgoing(self, u: int) -> None:
        for t in self.out_edges.pop(u, ()):
            if t in self.in_edges:
                self.in_edges[t].discard(u)

    # ----------------------------------------------------------- bookkeeping

    def end_step(self) -> None:
        """Record q for the step just completed and check conservation."""
        if len(self.waiting) + self.serviced != self.clock:
            raise InvariantViolation(
                f"conservation failed at step {self.clock}: |Q|={len(self.waiting)}, serviced={self.serviced}"
            )
        self.queue_trace.append(len(self.waiting))

    def finalize(self, horizon: int) -> "SimState":
        """Set a_t = T for every node still waiting at the horizon."""
        if self.clock != horizon:
            raise InvariantViolation(f"finalize at T={horizon} but clock is {self.clock}")
        for record in self.records:
            if record.service_time is None:
                record.service_time = horizon
        self.finalized = True
        return self

    def check_invariants(self) -> None:
        """Re-verify every chain against the oracle and the Q/chain partition."""
        on_chains: Set[int] = set()
        for chain in self.chains:
            for u, v in zip(chain.path, chain.path[1:]):
                if not self.oracle.edge_exists(u, v):
                    raise InvariantViolation(f"chain {chain.chain_id} uses missing edge {u} -> {v}")
            if on_chains.intersection(chain.path):
                raise InvariantViolation(f"chain {chain.chain_id} shares nodes with another chain")
            on_chains.update(chain.path)
        if on_chains.intersection(self.waiting):
            raise InvariantViolation("a waiting node also sits on a chain")
        if len(self.waiting) + self.serviced != self.clock:
            raise InvariantViolation("waiting plus serviced does not match the clock")

    # --------------------------------------------------------------- export

    def patient_times(self) -> Tuple[np.ndarray, np.ndarray]:
        """Arrival and service times of every patient (donors excluded)."""
        patients = self.records[self.donors:]
        arrivals = np.fromiter((r.arrival_time for r in patients), dtype=np.int64, count=len(patients))
        services = np.fromiter(
            (-1 if r.service_time is None else r.service_time for r in patients), dtype=np.int64, count=len(patients)
        )
        return arrivals, services

    def trace_frame(self) -> pd.DataFrame:
        """Trace as a DataFrame with a fixed column order."""
        frame = pd.DataFrame(
            [(e.step, e.event_kind.value, e.node_id, e.chain_id, e.path_length) for e in self.trace],
            columns=["step", "event_kind", "node_id", "chain_id", "path_length"],
        )
        frame["chain_id"] = frame["chain_id"].astype("Int64")
        return frame

    def export_trace(self, path: Union[str, Path]) -> Path:
        """Write the trace CSV (header included)."""
        path = Path(path)
        self.trace_frame().to_csv(path, index=False)
        return path
