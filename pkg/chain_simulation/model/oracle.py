"""
Edge Oracle

Responsible for:
- Deciding, deterministically, whether the donor of one pair is compatible
  with the patient of another
- Answering scalar and vectorized edge queries that agree bit-for-bit
- Materializing full adjacency blocks for small eager runs

Each ordered pair (u, v) is hashed with a keyed SplitMix64 counter so the
answer depends only on (seed, u, v, p), never on query order.
"""

from typing import Collection, Iterable, List

import numpy as np

from ..errors import InvalidPairError

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_UNIT = 1.0 / (1 << 53)


def splitmix64(z: int) -> int:
    """SplitMix64 finalizer on a Python int."""
    z = (z + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


def splitmix64_array(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer on a uint64 array (wrapping arithmetic)."""
    z = z + np.uint64(_GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


class EdgeOracle:
    """
    Seed-keyed pairwise edge sampler for the G(., p) arrival model.

    Args:
        seed: 64-bit seed; replications use seed XOR replication index
        p: edge probability in [0, 1]
    """

    def __init__(self, seed: int, p: float):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"edge probability must lie in [0, 1], got {p}")
        self.seed = seed & _MASK64
        self.p = float(p)
        self._key = splitmix64(self.seed)

    def __repr__(self) -> str:
        return f"EdgeOracle(seed={self.seed}, p={self.p})"

    def uniform(self, u: int, v: int) -> float:
        """Uniform draw in [0, 1) attached to the ordered pair (u, v)."""
        h = splitmix64(splitmix64(self._key ^ (int(u) & _MASK64)) ^ (int(v) & _MASK64))
        return (h >> 11) * _UNIT

    def edge_exists(self, u: int, v: int) -> bool:
        """Whether the donor of u is compatible with the patient of v."""
        if u == v:
            raise InvalidPairError(f"edge query on identical endpoints {u}")
        return self.uniform(u, v) < self.p

    def _uniform_from(self, u: int, targets: np.ndarray) -> np.ndarray:
        row_key = np.uint64(splitmix64(self._key ^ (int(u) & _MASK64)))
        h = splitmix64_array(row_key ^ targets.astype(np.uint64))
        return (h >> np.uint64(11)).astype(np.float64) * _UNIT

    def successors_mask(self, u: int, targets: Iterable[int]) -> np.ndarray:
        """Boolean mask of u -> t over targets."""
        arr = np.asarray(list(targets) if not isinstance(targets, np.ndarray) else targets, dtype=np.int64)
        if arr.size == 0:
            return np.zeros(0, dtype=bool)
        if np.any(arr == u):
            raise InvalidPairError(f"edge query on identical endpoints {u}")
        return self._uniform_from(u, arr) < self.p

    def predecessors_mask(self, sources: Iterable[int], v: int) -> np.ndarray:
        """Boolean mask of s -> v over sources."""
        arr = np.asarray(list(sources) if not isinstance(sources, np.ndarray) else sources, dtype=np.int64)
        if arr.size == 0:
            return np.zeros(0, dtype=bool)
        if np.any(arr == v):
            raise InvalidPairError(f"edge query on identical endpoints {v}")
        row_keys = splitmix64_array(np.uint64(self._key) ^ arr.astype(np.uint64))
        h = splitmix64_array(row_keys ^ np.uint64(int(v) & _MASK64))
        return (h >> np.uint64(11)).astype(np.float64) * _UNIT < self.p

    def successors_among(self, u: int, candidates: Collection[int]) -> List[int]:
        """Sorted candidates c with u -> c."""
        arr = np.asarray(sorted(c for c in candidates if c != u), dtype=np.int64)
        return arr[self.successors_mask(u, arr)].tolist()

    def predecessors_among(self, v: int, candidates: Collection[int]) -> List[int]:
        """Sorted candidates c with c -> v."""
        arr = np.asarray(sorted(c for c in candidates if c != v), dtype=np.int64)
        return arr[self.predecessors_mask(arr, v)].tolist()

    def adjacency_matrix(self, size: int) -> np.ndarray:
        """Eager size x size block over node ids 0..size-1 (diagonal False)."""
        ids = np.arange(size, dtype=np.int64)
        matrix = np.zeros((size, size), dtype=bool)
        for u in range(size):
            row = self._uniform_from(u, ids) < self.p
            row[u] = False
            matrix[u] = row
        return matrix


class EagerEdgeCache:
    """
    Fully materialized adjacency over the first `size` node ids.

    Answers the same queries as EdgeOracle from a precomputed matrix, so a run
    backed by it must reproduce a lazily sampled run exactly.
    """

    def __init__(self, oracle: EdgeOracle, size: int):
        self.oracle = oracle
        self.p = oracle.p
        self.matrix = oracle.adjacency_matrix(size)

    def edge_exists(self, u: int, v: int) -> bool:
        if u == v:
            raise InvalidPairError(f"edge query on identical endpoints {u}")
        return bool(self.matrix[u, v])

    def successors_mask(self, u: int, targets: Iterable[int]) -> np.ndarray:
        arr = np.asarray(list(targets) if not isinstance(targets, np.ndarray) else targets, dtype=np.int64)
        return self.matrix[u, arr] if arr.size else np.zeros(0, dtype=bool)

    def predecessors_mask(self, sources: Iterable[int], v: int) -> np.ndarray:
        arr = np.asarray(list(sources) if not isinstance(sources, np.ndarray) else sources, dtype=np.int64)
        return self.matrix[arr, v] if arr.size else np.zeros(0, dtype=bool)
