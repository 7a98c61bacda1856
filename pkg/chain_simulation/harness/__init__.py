"""
Harness Package

Experiment configuration, the LangGraph experiment workflow, sweeps, lemma
checks, walk reports, acceptance criteria and the command-line surface.
"""

from .acceptance import run_acceptance
from .lemmas import verify_lemmas
from .models import (
    AcceptanceReport,
    AcceptanceRequest,
    CriterionResult,
    ExperimentConfig,
    ExperimentReport,
    LemmaReport,
    LemmaRequest,
    LemmaResult,
    SweepConfig,
    WalkRequest,
    load_flat_config,
)
from .runner import ReplicationResult, run_replication, simulate_run
from .sweep import fit_sweep, read_sweep, run_sweep
from .walk_report import WalkReport, build_grid_report, build_walk_report
from .workflow import ExperimentWorkflow, run_experiment

__all__ = [
    'ExperimentConfig', 'SweepConfig', 'WalkRequest', 'LemmaRequest',
    'ExperimentReport', 'LemmaReport', 'LemmaResult', 'load_flat_config',
    'simulate_run', 'run_replication', 'ReplicationResult',
    'ExperimentWorkflow', 'run_experiment',
    'run_sweep', 'read_sweep', 'fit_sweep',
    'verify_lemmas',
    'WalkReport', 'build_walk_report', 'build_grid_report',
    'AcceptanceRequest', 'AcceptanceReport', 'CriterionResult', 'run_acceptance',
]
