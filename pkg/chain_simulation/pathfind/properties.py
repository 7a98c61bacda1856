"""
Subset-Edge Property

Exhaustive check that every two disjoint k-subsets of a digraph are joined by
an edge, the hypothesis of the DFS long-path lemma.
"""

from itertools import combinations

import networkx as nx

from ..config.simulation_config import SimulationConfig
from ..errors import SizeGuardError


def check_subset_edge_property(graph: nx.DiGraph, k: int, directed: bool = True) -> bool:
    """
    Whether every pair of disjoint k-subsets has an edge between them.

    For each k-subset S1 the vertices outside S1 that S1 cannot reach in one
    step are collected; a second k-subset free of edges exists iff at least k
    such vertices remain.

    Args:
        graph: digraph with at most 16 vertices
        k: subset size (>= 1)
        directed: require an edge S1 -> S2 for every ordered pair; when False
            an edge in either direction suffices

    Returns:
        True when the property holds (vacuously when n < 2k)

    Raises:
        SizeGuardError: more than 16 vertices
        ValueError: k < 1
    """
    n = graph.number_of_nodes()
    if n > SimulationConfig.SUBSET_CHECK_LIMIT:
        raise SizeGuardError(f"subset checks are limited to {SimulationConfig.SUBSET_CHECK_LIMIT} vertices")
    if k < 1:
        raise ValueError(f"subset size must be positive, got {k}")
    if n < 2 * k:
        return True

    order = sorted(graph.nodes)
    pos = {v: i for i, v in enumerate(order)}
    reach = [0] * n
    for u, v in graph.edges:
        reach[pos[u]] |= 1 << pos[v]
        if not directed:
            reach[pos[v]] |= 1 << pos[u]

    full = (1 << n) - 1
    for subset in combinations(range(n), k):
        mask = 0
        touched = 0
        for i in subset:
            mask |= 1 << i
            touched |= reach[i]
        if (full & ~(mask | touched)).bit_count() >= k:
            return False
    return True
