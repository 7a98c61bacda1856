"""
Chain Simulation Package

A discrete-time simulator for kidney-exchange chains started by altruistic
donors, with the matching policies, path search, random-walk analysis and
experiment harness built around it.
"""

from .config.simulation_config import PolicyName, SimulationConfig
from .harness import ExperimentConfig, run_experiment, simulate_run, verify_lemmas
from .model import EdgeOracle, SimState
from .policies import build_policy

__version__ = "0.1.0"
__all__ = [
    'SimulationConfig', 'PolicyName', 'EdgeOracle', 'SimState', 'build_policy',
    'ExperimentConfig', 'run_experiment', 'simulate_run', 'verify_lemmas',
]
