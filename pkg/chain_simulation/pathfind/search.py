"""
Path Search

Responsible for:
- DFS-LP: the deepest root-to-current stack seen during a depth-first search
- Exact longest-path and Hamiltonian-path search over vertex subsets
- A randomized restart search with cycle rotations for larger Hamiltonian instances
"""

import logging
import math
from typing import Collection, Dict, Iterator, List, Optional, Tuple

import networkx as nx
import numpy as np

from ..config.simulation_config import SimulationConfig
from ..errors import SizeGuardError

logger = logging.getLogger(__name__)


def _deepest_stack(graph: nx.DiGraph, root: int) -> List[int]:
    stack = [root]
    best = [root]
    best_len = 1
    pending = False
    for u, v, kind in nx.dfs_labeled_edges(graph, root, sort_neighbors=sorted):
        if u == v:
            continue
        if kind == "forward":
            stack.append(v)
            if len(stack) > best_len:
                best_len = len(stack)
                pending = True
        elif kind == "reverse":
            # snapshot a record stack just before it starts to unwind
            if pending:
                best = list(stack)
                pending = False
            stack.pop()
    if pending:
        best = list(stack)
    return best


def dfs_longest_observed(graph: nx.DiGraph, start: int) -> List[int]:
    """
    Run one DFS from start (oldest neighbour first) and return the deepest stack.

    Args:
        graph: directed graph
        start: root vertex

    Returns:
        Simple directed path beginning at start

    Raises:
        networkx.NodeNotFound: start is not in the graph
    """
    if start not in graph:
        raise nx.NodeNotFound(f"start vertex {start} is not in the graph")
    return _deepest_stack(graph, start)


def dfs_longest_observed_forest(graph: nx.DiGraph) -> List[int]:
    """DFS-LP restarted from every unvisited vertex in id order; deepest stack overall."""
    best: List[int] = []
    remaining = set(graph.nodes)
    for root in sorted(graph.nodes):
        if root not in remaining:
            continue
        view = graph.subgraph(remaining)
        path = _deepest_stack(view, root)
        remaining -= {root} | nx.descendants(view, root)
        if len(path) > len(best):
            best = path
    return best


# ---------------------------------------------------------------- subset DP

def _bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _bit_tables(graph: nx.DiGraph) -> Tuple[List[int], Dict[int, int], List[int]]:
    order = sorted(graph.nodes)
    pos = {v: i for i, v in enumerate(order)}
    succ = [0] * len(order)
    for u, v in graph.edges:
        succ[pos[u]] |= 1 << pos[v]
    return order, pos, succ


def _layered_walks(succ: List[int], start_bits: int, limit: int) -> Tuple[Dict[int, int], int, Dict[Tuple[int, int], int]]:
    """
    Grow simple paths one vertex per layer.

    Returns:
        (last non-empty layer as mask -> bitset of end vertices, its depth, parents)
    """
    layer = {1 << i: 1 << i for i in _bits(start_bits)}
    parent: Dict[Tuple[int, int], int] = {}
    depth = 1 if layer else 0
    while layer and depth < limit:
        nxt: Dict[int, int] = {}
        for mask, ends in layer.items():
            for v in _bits(ends):
                for w in _bits(succ[v] & ~mask):
                    grown = mask | (1 << w)
                    seen = nxt.get(grown, 0)
                    if not (seen >> w) & 1:
                        nxt[grown] = seen | (1 << w)
                        parent[(grown, w)] = v
        if not nxt:
            break
        layer = nxt
        depth += 1
    return layer, depth, parent


def _unwind(mask: int, end: int, parent: Dict[Tuple[int, int], int]) -> List[int]:
    path = [end]
    while mask & (mask - 1):
        prev = parent[(mask, end)]
        mask ^= 1 << end
        end = prev
        path.append(end)
    path.reverse()
    return path


def longest_path_bruteforce(graph: nx.DiGraph, start: int) -> List[int]:
    """
    Exact longest simple path from start.

    Raises:
        SizeGuardError: more than 16 vertices
    """
    if graph.number_of_nodes() > SimulationConfig.BRUTE_FORCE_LIMIT:
        raise SizeGuardError(f"brute force is limited to {SimulationConfig.BRUTE_FORCE_LIMIT} vertices")
    if start not in graph:
        raise nx.NodeNotFound(f"start vertex {start} is not in the graph")
    order, pos, succ = _bit_tables(graph)
    layer, _, parent = _layered_walks(succ, 1 << pos[start], len(order))
    mask = min(layer)
    end = next(_bits(layer[mask]))
    return [order[i] for i in _unwind(mask, end, parent)]


def hamiltonian_path_exact(graph: nx.DiGraph, start_candidates: Collection[int]) -> Optional[List[int]]:
    """Exact Hamiltonian path search starting in start_candidates (subset DP)."""
    n = graph.number_of_nodes()
    if n == 0:
        return None
    order, pos, succ = _bit_tables(graph)
    start_bits = 0
    for v in start_candidates:
        if v in pos:
            start_bits |= 1 << pos[v]
    layer, depth, parent = _layered_walks(succ, start_bits, n)
    full = (1 << n) - 1
    if depth < n or full not in layer:
        return None
    end = next(_bits(layer[full]))
    return [order[i] for i in _unwind(full, end, parent)]


# ------------------------------------------------------------ rotations

def _rotations(path: List[int], succ: Dict[int, List[int]], starts: Collection[int]) -> List[List[int]]:
    """
    Paths over the same vertex set obtained by closing a cycle at the end.

    With an edge p_k -> p_i the tail p_i..p_k is a cycle; if p_{i-1} -> p_j for
    some j in (i, k] the path can re-enter the cycle at p_j and end at p_{j-1}.
    """
    pos = {v: i for i, v in enumerate(path)}
    k = len(path) - 1
    options: List[List[int]] = []
    for target in succ[path[-1]]:
        i = pos.get(target)
        if i is None or i == k:
            continue
        if i == 0:
            for j in range(1, k + 1):
                if path[j] in starts:
                    options.append(path[j:] + path[:j])
            continue
        for entry in succ[path[i - 1]]:
            j = pos.get(entry)
            if j is not None and i < j <= k:
                options.append(path[:i] + path[j:] + path[i:j])
    return options


def hamiltonian_path_rotation(
    graph: nx.DiGraph,
    start_candidates: Collection[int],
    restarts: int,
    rng: np.random.Generator,
) -> Optional[List[int]]:
    """
    Randomized restart search: greedy extension by fewest free out-neighbours,
    then cycle rotations when stuck. Sound but incomplete.
    """
    n = graph.number_of_nodes()
    starts = sorted(v for v in start_candidates if v in graph)
    if n == 0 or not starts:
        return None
    succ = {v: sorted(graph.successors(v)) for v in graph.nodes}
    start_set = set(starts)

    for _ in range(restarts):
        path = [starts[int(rng.integers(len(starts)))]]
        on_path = {path[0]}
        rotations = 0
        while len(path) < n:
            free = [w for w in succ[path[-1]] if w not in on_path]
            if free:
                scores = [sum(1 for z in succ[w] if z not in on_path) for w in free]
                low = min(scores)
                picks = [w for w, s in zip(free, scores) if s == low]
                w = picks[int(rng.integers(len(picks)))]
                path.append(w)
                on_path.add(w)
                continue
            if rotations >= n:
                break
            options = _rotations(path, succ, start_set)
            if not options:
                break
            open_ends = [o for o in options if any(z not in on_path for z in succ[o[-1]])]
            pool = open_ends or options
            path = pool[int(rng.integers(len(pool)))]
            rotations += 1
        if len(path) == n:
            return path
    return None


def find_hamiltonian_path(
    graph: nx.DiGraph,
    start_candidates: Collection[int],
    budget: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
    exact_limit: int = SimulationConfig.EXACT_HAMILTONIAN_LIMIT,
) -> Optional[List[int]]:
    """
    Find a path through every vertex that starts at one of start_candidates.

    Exact subset search up to exact_limit vertices; beyond it a rotation
    heuristic with `budget` restarts (default n * ceil(log2 n)).

    Returns:
        The path, or None when none was found
    """
    n = graph.number_of_nodes()
    starts = {v for v in start_candidates if v in graph}
    if n == 0 or not starts:
        return None
    if n == 1:
        return [next(iter(graph.nodes))]
    if not _degree_feasible(graph, starts):
        return None

    rng = rng if rng is not None else np.random.default_rng(0)
    restarts = budget if budget is not None else n * math.ceil(math.log2(n))
    if n <= exact_limit:
        # a quick heuristic pass usually finds existing paths before the DP runs
        found = hamiltonian_path_rotation(graph, starts, min(restarts, 2), rng)
        return found if found is not None else hamiltonian_path_exact(graph, starts)
    found = hamiltonian_path_rotation(graph, starts, restarts, rng)
    if found is None:
        logger.debug(f"rotation search found no Hamiltonian path on {n} vertices after {restarts} restarts")
    return found


def _degree_feasible(graph: nx.DiGraph, starts: Collection[int]) -> bool:
    """Cheap necessary conditions for a Hamiltonian path from starts."""
    sources = [v for v, d in graph.in_degree() if d == 0]
    sinks = [v for v, d in graph.out_degree() if d == 0]
    if len(sources) > 1 or len(sinks) > 1:
        return False
    if sources and sources[0] not in starts:
        return False
    # strongly connected components must line up in a single chain
    condensed = nx.condensation(graph)
    if condensed.number_of_nodes() > 1:
        order = list(nx.topological_sort(condensed))
        if any(not condensed.has_edge(a, b) for a, b in zip(order, order[1:])):
            return False
        first = condensed.nodes[order[0]]["members"]
        if not first & set(starts):
            return False
    return True
