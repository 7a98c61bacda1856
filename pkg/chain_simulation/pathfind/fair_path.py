"""
FAIR-PATH

Responsible for:
- Contracting each old waiting node into one labeled edge between two new arrivals
- Attaching the chain end with its unlabeled out-edges
- Expanding a DFS-LP path of the contracted graph back into a chain extension
"""

from collections import defaultdict
from dataclasses import dataclass
from typing import Collection, Dict, List, Optional, Protocol, Tuple

import networkx as nx
import numpy as np

from ..errors import InvalidPathError
from .search import dfs_longest_observed


class EdgeView(Protocol):
    """Anything that can list neighbours of a node inside a candidate set."""

    def successors_among(self, u: int, candidates: Collection[int]) -> List[int]: ...

    def predecessors_among(self, v: int, candidates: Collection[int]) -> List[int]: ...


@dataclass
class LabeledDiGraph:
    """
    Contracted FAIR-PATH graph.

    Edge attribute "label" holds the old node an edge stands for, or None for
    the end node's own out-edges (and direct new-to-new edges when enabled).
    """
    graph: nx.DiGraph
    end: int
    empty_extension: bool

    def label(self, u: int, v: int) -> Optional[int]:
        return self.graph.edges[u, v]["label"]


def _pick(items: List, rng: np.random.Generator):
    return items[0] if len(items) == 1 else items[int(rng.integers(len(items)))]


def build_fair_path_graph(
    old_nodes: Collection[int],
    new_nodes: Collection[int],
    end: int,
    edges: EdgeView,
    rng: np.random.Generator,
    include_direct: bool = False,
) -> LabeledDiGraph:
    """
    Build the contracted graph for one FAIR-PATH call.

    Args:
        old_nodes: waiting nodes carried over from earlier phases (Q)
        new_nodes: arrivals of the current phase (V_fp)
        end: current chain end
        edges: edge view (SimState or EdgeOracle)
        rng: stream for the uniform in/out and parallel-edge choices
        include_direct: also add unlabeled new -> new edges

    Returns:
        LabeledDiGraph; empty_extension is set when the end has no edge into new_nodes

    Raises:
        ValueError: old and new nodes overlap, or end is a new node
    """
    new_set = frozenset(new_nodes)
    if end in new_set:
        raise ValueError(f"chain end {end} cannot be a new arrival")
    if new_set.intersection(old_nodes):
        raise ValueError("old and new node sets overlap")

    parallel: Dict[Tuple[int, int], List[Optional[int]]] = defaultdict(list)
    for v in sorted(old_nodes):
        ins = edges.predecessors_among(v, new_set)
        if not ins:
            continue
        outs = edges.successors_among(v, new_set)
        if not outs:
            continue
        u1, u2 = _pick(ins, rng), _pick(outs, rng)
        # a 2-cycle through v cannot sit on a simple path
        if u1 != u2:
            parallel[(u1, u2)].append(v)
    if include_direct:
        for u in sorted(new_set):
            for w in edges.successors_among(u, new_set):
                parallel[(u, w)].append(None)

    graph = nx.DiGraph()
    graph.add_node(end)
    graph.add_nodes_from(sorted(new_set))
    end_out = edges.successors_among(end, new_set)
    for w in end_out:
        graph.add_edge(end, w, label=None)
    for pair in sorted(parallel):
        graph.add_edge(*pair, label=_pick(parallel[pair], rng))

    return LabeledDiGraph(graph=graph, end=end, empty_extension=not end_out)


def expand_labeled_path(labeled: LabeledDiGraph, path: List[int]) -> List[int]:
    """
    Insert each edge's label between its endpoints and drop the end node.

    Raises:
        InvalidPathError: path does not start at the chain end
    """
    if not path or path[0] != labeled.end:
        raise InvalidPathError(f"FAIR-PATH walk must start at the chain end {labeled.end}")
    nodes: List[int] = []
    for u, w in zip(path, path[1:]):
        label = labeled.label(u, w)
        if label is not None:
            nodes.append(label)
        nodes.append(w)
    return nodes


def fair_path_extension(
    old_nodes: Collection[int],
    new_nodes: Collection[int],
    end: int,
    edges: EdgeView,
    rng: np.random.Generator,
    include_direct: bool = False,
) -> List[int]:
    """Build the contracted graph, run DFS-LP from the end and expand (possibly empty)."""
    labeled = build_fair_path_graph(old_nodes, new_nodes, end, edges, rng, include_direct)
    if labeled.empty_extension:
        return []
    return expand_labeled_path(labeled, dfs_longest_observed(labeled.graph, end))
