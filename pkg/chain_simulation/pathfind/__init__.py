"""
Path Finding Package

DFS-LP, FAIR-PATH contraction, Hamiltonian search and the subset-edge property.
"""

from .fair_path import LabeledDiGraph, build_fair_path_graph, expand_labeled_path, fair_path_extension
from .graphs import (
    complete_digraph,
    is_directed_path,
    make_digraph,
    random_digraph,
    reachable_set,
    read_edge_list,
    write_edge_list,
)
from .properties import check_subset_edge_property
from .search import (
    dfs_longest_observed,
    dfs_longest_observed_forest,
    find_hamiltonian_path,
    hamiltonian_path_exact,
    hamiltonian_path_rotation,
    longest_path_bruteforce,
)

__all__ = [
    'LabeledDiGraph', 'build_fair_path_graph', 'expand_labeled_path', 'fair_path_extension',
    'make_digraph', 'random_digraph', 'complete_digraph', 'reachable_set',
    'is_directed_path', 'read_edge_list', 'write_edge_list',
    'check_subset_edge_property',
    'dfs_longest_observed', 'dfs_longest_observed_forest', 'find_hamiltonian_path',
    'hamiltonian_path_exact', 'hamiltonian_path_rotation', 'longest_path_bruteforce',
]
