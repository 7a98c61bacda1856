"""
Random Walk Package

The (M, K, rho, beta) drift walk that dominates policy queue sizes, its
stationary distribution and bounds.
"""

from .walk import (
    SteadyState,
    WalkParams,
    approximate_mean_bound,
    exact_alpha,
    expected_value_bound,
    occupancy_distance,
    root_bracket,
    root_function,
    simulate_walk,
    solve_root,
    steady_state,
    tail_bound,
    walk_statistics,
)

__all__ = [
    'WalkParams', 'SteadyState', 'simulate_walk', 'solve_root', 'exact_alpha', 'steady_state',
    'expected_value_bound', 'tail_bound', 'approximate_mean_bound', 'root_bracket', 'root_function',
    'walk_statistics', 'occupancy_distance',
]
