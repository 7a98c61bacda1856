"""
Configuration Package

Centralized defaults and enumerations for simulations and experiments.
"""

from .simulation_config import DonorRule, LemmaName, PolicyName, ScalingModel, SimulationConfig, TieBreak

__all__ = ['SimulationConfig', 'PolicyName', 'TieBreak', 'ScalingModel', 'LemmaName', 'DonorRule']
