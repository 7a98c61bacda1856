"""
Graph Helpers

Construction, sampling and edge-list I/O for the networkx digraphs used by the
search routines. Vertices are inserted in ascending id (arrival) order so
neighbour iteration is oldest-first.
"""

from pathlib import Path
from typing import Iterable, List, Set, Tuple, Union

import networkx as nx
import numpy as np


def make_digraph(nodes: Iterable[int], edges: Iterable[Tuple[int, int]]) -> nx.DiGraph:
    """
    Build a digraph with sorted vertex and edge insertion order.

    Raises:
        ValueError: an edge is a self-loop
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(sorted(set(nodes)))
    for u, v in sorted(set(edges)):
        if u == v:
            raise ValueError(f"self-loop on {u}")
        graph.add_edge(u, v)
    return graph


def random_digraph(n: int, p: float, rng: np.random.Generator) -> nx.DiGraph:
    """Directed G(n, p) on vertices 0..n-1."""
    mask = rng.random((n, n)) < p
    np.fill_diagonal(mask, False)
    sources, targets = np.nonzero(mask)
    return make_digraph(range(n), zip(sources.tolist(), targets.tolist()))


def complete_digraph(n: int) -> nx.DiGraph:
    return make_digraph(range(n), ((u, v) for u in range(n) for v in range(n) if u != v))


def reachable_set(graph: nx.DiGraph, source: int) -> Set[int]:
    """Vertices reachable from source, source included."""
    return nx.descendants(graph, source) | {source}


def is_directed_path(graph: nx.DiGraph, path: List[int]) -> bool:
    """Whether path is a non-empty simple directed path in graph."""
    if len(path) == 1:
        return path[0] in graph
    return bool(path) and nx.is_simple_path(graph, path)


def write_edge_list(graph: nx.DiGraph, path: Union[str, Path]) -> Path:
    """Write one "u v" line per edge."""
    path = Path(path)
    nx.write_edgelist(graph, path, data=False)
    return path


def read_edge_list(path: Union[str, Path]) -> nx.DiGraph:
    """Read an edge list written by write_edge_list (isolated vertices are not stored)."""
    loaded = nx.read_edgelist(Path(path), nodetype=int, create_using=nx.DiGraph, data=False)
    return make_digraph(loaded.nodes, loaded.edges)
