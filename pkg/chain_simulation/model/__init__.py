"""
Core Model Package

Online arrival process, edge oracle and chain bookkeeping.
"""

from .oracle import EagerEdgeCache, EdgeOracle
from .state import ChainState, EventKind, NodeRecord, SimState, TraceEvent

__all__ = ['EdgeOracle', 'EagerEdgeCache', 'SimState', 'NodeRecord', 'ChainState', 'TraceEvent', 'EventKind']
