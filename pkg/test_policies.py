"""
Tests for the matching policies, driven step by step or through simulate_run.
"""

import numpy as np
import pytest

from chain_simulation.config import PolicyName, TieBreak
from chain_simulation.errors import ConfigError
from chain_simulation.harness.runner import policy_stream, simulate_run
from chain_simulation.metrics import compute_summary
from chain_simulation.model import EdgeOracle, EventKind, SimState
from chain_simulation.policies import (
    BatchPolicy,
    ClearAllPolicy,
    GreedyBatchPolicy,
    GreedyPolicy,
    MultiGreedyPolicy,
    NaspPolicy,
    build_policy,
)


def _extension_events(state):
    return [event for event in state.trace if event.event_kind is EventKind.EXTENSION]


def test_greedy_with_all_edges_serves_on_arrival():
    state, _ = simulate_run("greedy", 1.0, 50, seed=1)
    summary = compute_summary(state, 50)
    assert summary.mean_wait == 0
    assert not state.waiting


def test_greedy_takes_the_oldest_neighbour_until_stuck():
    oracle = EdgeOracle(seed=21, p=0.15)
    state = SimState(oracle)
    policy = GreedyPolicy(policy_stream(21))
    extensions = 0
    for _ in range(400):
        state.arrive()
        proposals = policy.step(state)
        for chain_id, path in proposals:
            remaining = set(state.waiting)
            current = state.chains[chain_id].end
            for v in path:
                assert v == min(w for w in remaining if oracle.edge_exists(current, w))
                remaining.discard(v)
                current = v
            assert not any(oracle.edge_exists(current, w) for w in remaining)
            state.extend_chain(chain_id, path)
            extensions += 1
        policy.check(state)
        state.end_step()
    assert extensions > 0


def test_multi_greedy_routes_to_lowest_indexed_chain():
    oracle = EdgeOracle(seed=5, p=0.2)
    state = SimState(oracle, donors=3)
    policy = MultiGreedyPolicy(policy_stream(5))
    for _ in range(300):
        x = state.arrive()
        hits = [chain.chain_id for chain in state.chains if oracle.edge_exists(chain.end, x)]
        proposals = policy.step(state)
        if hits:
            assert [chain_id for chain_id, _ in proposals] == [min(hits)]
        else:
            assert proposals == []
        for chain_id, path in proposals:
            state.extend_chain(chain_id, path)
        policy.check(state)
        state.end_step()
    state.finalize(300)
    state.check_invariants()


def test_multi_greedy_random_tie_break_keeps_chains_disjoint():
    state, policy = simulate_run("multi-greedy", 0.2, 300, seed=8, donors=4, tie_break=TieBreak.RANDOM)
    assert policy.tie_break is TieBreak.RANDOM
    assert len(state.chains) == 4
    served = [v for chain in state.chains for v in chain.path[1:]]
    assert len(served) == len(set(served)) == state.serviced


def test_batch_phases_close_every_theta_arrivals():
    state, policy = simulate_run("batch", 0.1, 100, seed=3, c=1.0)
    assert policy.phase.threshold == 10
    assert policy.phase_lengths == [10] * 10
    assert all(event.step % 10 == 0 for event in _extension_events(state))


def test_batch_default_c():
    state, policy = simulate_run("batch", 0.1, 600, seed=3)
    assert policy.phase.threshold == 120
    assert policy.phase_lengths == [120] * 5


def test_nasp_extensions_reach_theta():
    state, policy = simulate_run("nasp", 0.2, 600, seed=12, c=3.0)
    assert policy.threshold == 15
    assert policy.extension_lengths
    assert min(policy.extension_lengths) >= 15
    assert [event.path_length for event in _extension_events(state)] == policy.extension_lengths


def test_greedy_batch_matches_every_triggering_arrival():
    state, policy = simulate_run("greedy-batch", 0.2, 500, seed=6, c=1.0)
    assert policy.greedy_lengths
    assert policy.fair_path_lengths
    extras = policy.extras()
    assert extras["greedy_extension_lengths"] == policy.greedy_lengths
    assert extras["fair_path_extension_lengths"] == policy.fair_path_lengths
    assert len(_extension_events(state)) == len(policy.extension_lengths)


def test_clear_all_empties_the_queue():
    state, policy = simulate_run("clear-all", 0.3, 300, seed=2)
    assert len(policy.phase_lengths) >= 5
    assert all(length > 0 for length in policy.extension_lengths)
    cleared_at = {event.step for event in _extension_events(state)}
    for step in cleared_at:
        assert state.queue_trace[step - 1] == 0


def test_registry_builds_each_policy():
    rng = np.random.default_rng(0)
    expected = {
        PolicyName.GREEDY: GreedyPolicy,
        PolicyName.MULTI_GREEDY: MultiGreedyPolicy,
        PolicyName.CLEAR_ALL: ClearAllPolicy,
        PolicyName.BATCH: BatchPolicy,
        PolicyName.NASP: NaspPolicy,
        PolicyName.GREEDY_BATCH: GreedyBatchPolicy,
    }
    for name, cls in expected.items():
        assert isinstance(build_policy(name, 0.1, rng), cls)
    assert build_policy("nasp", 0.1, rng).threshold == 1200
    assert build_policy("nasp", 0.1, rng, c=3.0).threshold == 30


def test_registry_rejects_bad_requests():
    rng = np.random.default_rng(0)
    with pytest.raises(ConfigError):
        build_policy(PolicyName.GREEDY, 0.1, rng, donors=2)
    with pytest.raises(ValueError):
        build_policy("fifo", 0.1, rng)
