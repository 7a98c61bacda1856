"""
Metrics Package

Waiting-time summaries, tail quantiles and scaling-law fits.
"""

from .scaling import ScalingFit, fit_scaling, scaling_basis
from .summary import (
    RunSummary,
    additional_wait,
    aggregate_summaries,
    compute_summary,
    mean_confidence_interval,
    nearest_rank,
    per_node_tail,
    queue_from_waits,
)

__all__ = [
    'RunSummary', 'compute_summary', 'per_node_tail', 'nearest_rank', 'additional_wait',
    'queue_from_waits', 'mean_confidence_interval', 'aggregate_summaries',
    'ScalingFit', 'fit_scaling', 'scaling_basis',
]
