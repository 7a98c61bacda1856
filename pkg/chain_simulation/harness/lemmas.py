"""
Lemma Verifier

Responsible for:
- Monte Carlo checks of the random-graph statements the policies rely on
- Exhaustive subset-property verdicts on small digraphs
- Frequency reports with trial counts and pass/fail against each threshold
"""

import logging
import math
from itertools import combinations
from typing import Callable, Dict, Iterable, Optional

import numpy as np

from ..config.simulation_config import LemmaName
from ..errors import SizeGuardError
from ..model.oracle import EdgeOracle
from ..pathfind.fair_path import fair_path_extension
from ..pathfind.graphs import make_digraph, random_digraph, reachable_set
from ..pathfind.properties import check_subset_edge_property
from ..pathfind.search import dfs_longest_observed, dfs_longest_observed_forest
from .models import LemmaReport, LemmaResult

logger = logging.getLogger(__name__)

DEFAULT_TRIALS = {
    LemmaName.RANDOM_M: 500,
    LemmaName.DFS_PATH: 1000,
    LemmaName.START_NODES: 200,
    LemmaName.GNP_PATH: 100,
    LemmaName.CLAIM_LONG_PATH: 20,
}

MAX_EXHAUSTIVE_VERTICES = 14


def random_m_edges(n: int, k: int, delta: float) -> int:
    """m = ceil((n^2/k) ln(n/(k delta)))."""
    return math.ceil((n * n / k) * math.log(n / (k * delta)))


def check_random_m(trials: int, rng: np.random.Generator, n: int = 12, k: int = 3, delta: float = 0.1) -> LemmaResult:
    """
    m uniformly random ordered pairs (with replacement, no self-pairs) on n
    vertices leave two disjoint k-subsets without an edge at most a delta
    fraction of the time.
    """
    m = random_m_edges(n, k, delta)
    failures = 0
    for _ in range(trials):
        sources = rng.integers(0, n, size=m)
        # shifting by 1..n-1 keeps the target uniform over the other vertices
        targets = (sources + rng.integers(1, n, size=m)) % n
        graph = make_digraph(range(n), zip(sources.tolist(), targets.tolist()))
        if not check_subset_edge_property(graph, k):
            failures += 1
    frequency = failures / trials
    return LemmaResult(
        lemma=LemmaName.RANDOM_M,
        trials=trials,
        successes=trials - failures,
        frequency=frequency,
        threshold=delta,
        passed=frequency <= delta,
        details={"n": n, "k": k, "delta": delta, "m": m, "failures": failures},
    )


def _property_instances(
    trials: int,
    rng: np.random.Generator,
    min_n: Callable[[int], int],
    max_n: int,
    max_attempts: int,
) -> Iterable:
    """Random digraphs (n <= max_n) that satisfy the k-subset property, with their k."""
    found = attempts = 0
    while found < trials and attempts < max_attempts:
        attempts += 1
        k = int(rng.integers(1, 4))
        low = min_n(k)
        if low > max_n:
            continue
        n = int(rng.integers(low, max_n + 1))
        graph = random_digraph(n, float(rng.uniform(0.3, 0.9)), rng)
        if check_subset_edge_property(graph, k):
            found += 1
            yield graph, k, attempts


def check_dfs_path(trials: int, rng: np.random.Generator, max_n: int = MAX_EXHAUSTIVE_VERTICES) -> LemmaResult:
    """Multi-start DFS reaches at least n - 2k vertices whenever the k-subset property holds."""
    if max_n > MAX_EXHAUSTIVE_VERTICES:
        raise SizeGuardError(f"dfs-path instances are limited to {MAX_EXHAUSTIVE_VERTICES} vertices")
    successes = total = attempts = 0
    worst: Optional[int] = None
    for graph, k, attempts in _property_instances(trials, rng, lambda k: 2 * k, max_n, 50 * trials):
        n = graph.number_of_nodes()
        margin = len(dfs_longest_observed_forest(graph)) - (n - 2 * k)
        total += 1
        successes += margin >= 0
        worst = margin if worst is None else min(worst, margin)
    frequency = successes / total if total else 0.0
    return LemmaResult(
        lemma=LemmaName.DFS_PATH,
        trials=total,
        successes=successes,
        frequency=frequency,
        threshold=1.0,
        passed=total > 0 and successes == total,
        details={"max_n": max_n, "attempts": attempts, "worst_margin": worst},
    )


def check_start_nodes(trials: int, rng: np.random.Generator, max_n: int = MAX_EXHAUSTIVE_VERTICES) -> LemmaResult:
    """
    With n >= 3k and the k-subset property, every k-subset of vertices holds a
    start from which a single DFS reaches at least n - 2k vertices.

    A DFS never leaves the reachable set of its start, so starts that reach
    fewer than n - 2k vertices are ruled out without searching.
    """
    if max_n > MAX_EXHAUSTIVE_VERTICES:
        raise SizeGuardError(f"start-nodes instances are limited to {MAX_EXHAUSTIVE_VERTICES} vertices")
    successes = total = attempts = 0
    min_good_reach: Optional[int] = None
    max_bad_reach = 0
    for graph, k, attempts in _property_instances(trials, rng, lambda k: 3 * k, max_n, 50 * trials):
        n = graph.number_of_nodes()
        reach = {v: len(reachable_set(graph, v)) for v in graph.nodes}
        good = {
            v for v in graph.nodes
            if reach[v] >= n - 2 * k and len(dfs_longest_observed(graph, v)) >= n - 2 * k
        }
        total += 1
        successes += all(good.intersection(subset) for subset in combinations(graph.nodes, k))
        if good:
            smallest = min(reach[v] for v in good)
            min_good_reach = smallest if min_good_reach is None else min(min_good_reach, smallest)
        max_bad_reach = max([max_bad_reach] + [reach[v] for v in graph.nodes if v not in good])
    frequency = successes / total if total else 0.0
    return LemmaResult(
        lemma=LemmaName.START_NODES,
        trials=total,
        successes=successes,
        frequency=frequency,
        threshold=1.0,
        passed=total > 0 and successes == total,
        details={"max_n": max_n, "attempts": attempts, "min_good_reach": min_good_reach, "max_bad_reach": max_bad_reach},
    )


def check_gnp_path(
    trials: int, rng: np.random.Generator, c: float = 120.0, p: float = 0.1, threshold: float = 0.99
) -> LemmaResult:
    """Among 1.2c/p fresh G(n, p) arrivals, DFS finds a path of at least c/p vertices."""
    n = math.ceil(1.2 * c / p)
    target = math.ceil(c / p)
    successes = 0
    lengths = []
    for _ in range(trials):
        length = len(dfs_longest_observed_forest(random_digraph(n, p, rng)))
        lengths.append(length)
        successes += length >= target
    frequency = successes / trials
    return LemmaResult(
        lemma=LemmaName.GNP_PATH,
        trials=trials,
        successes=successes,
        frequency=frequency,
        threshold=threshold,
        passed=frequency >= threshold,
        details={"c": c, "p": p, "n": n, "target": target, "min_length": int(min(lengths)), "mean_length": float(np.mean(lengths))},
    )


def check_claim_long_path(
    trials: int, rng: np.random.Generator, c: float = 12.0, p: float = 0.1, delta: float = 0.1
) -> LemmaResult:
    """
    With (10c/p) ln(10/delta) old waiting nodes and 0.625c/p new arrivals, the
    mean FAIR-PATH extension has at least c/p nodes.
    """
    old = math.ceil((10 * c / p) * math.log(10 / delta))
    new = math.ceil(0.625 * c / p)
    target = c / p
    end = 0
    old_nodes = range(1, old + 1)
    new_nodes = list(range(old + 1, old + new + 1))
    lengths = []
    for _ in range(trials):
        oracle = EdgeOracle(int(rng.integers(0, 2**63)), p)
        lengths.append(len(fair_path_extension(old_nodes, new_nodes, end, oracle, rng)))
    mean = float(np.mean(lengths))
    successes = sum(length >= target for length in lengths)
    return LemmaResult(
        lemma=LemmaName.CLAIM_LONG_PATH,
        trials=trials,
        successes=successes,
        frequency=successes / trials,
        passed=mean >= target,
        details={"c": c, "p": p, "delta": delta, "old": old, "new": new, "target": target, "mean_length": mean},
    )


CHECKS: Dict[LemmaName, Callable[..., LemmaResult]] = {
    LemmaName.RANDOM_M: check_random_m,
    LemmaName.DFS_PATH: check_dfs_path,
    LemmaName.START_NODES: check_start_nodes,
    LemmaName.GNP_PATH: check_gnp_path,
    LemmaName.CLAIM_LONG_PATH: check_claim_long_path,
}


def verify_lemmas(
    which: Optional[Iterable[LemmaName]] = None,
    trials: Optional[int] = None,
    seed: int = 0,
    **options,
) -> LemmaReport:
    """
    Run the selected lemma checks.

    Args:
        which: lemmas to check (all when omitted)
        trials: trial count for every lemma (per-lemma default when omitted)
        seed: each lemma draws from its own stream spawned from this seed
        options: per-lemma keyword overrides, keyed by lemma value, e.g.
            {"gnp-path": {"c": 20, "p": 0.2}}

    Returns:
        LemmaReport
    """
    names = [LemmaName(name) for name in (which or list(LemmaName))]
    streams = dict(zip(LemmaName, np.random.SeedSequence(seed).spawn(len(LemmaName))))
    results = []
    for name in names:
        count = trials if trials is not None else DEFAULT_TRIALS[name]
        kwargs = options.get(name.value, {})
        result = CHECKS[name](count, np.random.default_rng(streams[name]), **kwargs)
        level = logging.INFO if result.passed else logging.WARNING
        logger.log(level, f"{name.value}: {result.successes}/{result.trials} ({'pass' if result.passed else 'FAIL'})")
        results.append(result)
    return LemmaReport(seed=seed, results=results)
