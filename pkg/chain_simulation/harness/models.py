"""
Harness Models

Pydantic models for experiment, sweep, walk and lemma requests, their reports,
and the flat key-value config file loader.
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..config.simulation_config import DonorRule, LemmaName, PolicyName, SimulationConfig, TieBreak
from ..errors import ConfigError


def _check_probability(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    return p


class ExperimentConfig(BaseModel):
    """One policy at one p, replicated."""

    model_config = ConfigDict(extra="forbid")

    policy: PolicyName = Field(..., description="Matching policy")
    p: float = Field(..., description="Edge probability")
    c: Optional[float] = Field(default=None, gt=0, description="Phase parameter (policy default when omitted)")
    donors: int = Field(default=SimulationConfig.DEFAULT_DONORS, ge=1, description="Number of altruistic donors R")
    tie_break: TieBreak = Field(default=SimulationConfig.DEFAULT_TIE_BREAK, description="Multi-donor chain choice")
    T: Optional[int] = Field(default=None, ge=1, description="Horizon (default max(1e5, 200 (1/p) ln(1/p)))")
    replications: int = Field(default=1, ge=1)
    base_seed: int = Field(default=0, ge=0, description="Replication r uses seed base_seed XOR r")
    burn_in: float = Field(default=SimulationConfig.HARNESS_BURN_IN, ge=0, lt=1)
    probe: Optional[int] = Field(default=None, ge=1, description="Probe time for the additional-wait statistic")
    eager_edges: bool = Field(default=False, description="Precompute the whole adjacency matrix (small T only)")
    output_dir: Optional[Path] = Field(default=None, description="Where summary.json and the CSVs go")
    workers: int = Field(default=1, ge=1, description="Replication worker processes")

    @field_validator("p")
    @classmethod
    def _check_p(cls, p: float) -> float:
        return _check_probability(p)

    @model_validator(mode="after")
    def _resolve_defaults(self) -> "ExperimentConfig":
        if self.T is None:
            self.T = SimulationConfig.default_horizon(self.p)
        if self.c is None and self.policy in SimulationConfig.DEFAULT_C:
            self.c = SimulationConfig.default_c(self.policy)
        if self.donors > 1 and self.policy is not PolicyName.MULTI_GREEDY:
            raise ValueError(f"policy {self.policy.value} runs a single chain, got donors={self.donors}")
        if self.probe is not None and self.probe > self.T:
            raise ValueError(f"probe {self.probe} lies beyond the horizon {self.T}")
        return self

    @property
    def horizon(self) -> int:
        return int(self.T)

    def seed_for(self, replication: int) -> int:
        return self.base_seed ^ replication

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "ExperimentConfig":
        return cls(**load_flat_config(path))


class SweepConfig(BaseModel):
    """Policies crossed with a p grid."""

    model_config = ConfigDict(extra="forbid")

    policies: List[PolicyName] = Field(..., min_length=1)
    p_grid: List[float] = Field(..., min_length=3, description="At least three distinct p values")
    c: Optional[float] = Field(default=None, gt=0)
    donors: int = Field(default=SimulationConfig.DEFAULT_DONORS, ge=1)
    donor_rule: DonorRule = Field(default=DonorRule.FIXED, description="Per-point donor count for multi-greedy")
    tie_break: TieBreak = Field(default=SimulationConfig.DEFAULT_TIE_BREAK)
    T: Optional[int] = Field(default=None, ge=1, description="Horizon for every point (per-p default when omitted)")
    replications: int = Field(default=1, ge=1)
    base_seed: int = Field(default=0, ge=0)
    burn_in: float = Field(default=SimulationConfig.HARNESS_BURN_IN, ge=0, lt=1)
    output_dir: Optional[Path] = None
    workers: int = Field(default=1, ge=1)

    @field_validator("p_grid")
    @classmethod
    def _check_grid(cls, grid: List[float]) -> List[float]:
        for p in grid:
            _check_probability(p)
        if len(set(grid)) != len(grid):
            raise ValueError("p_grid values must be distinct")
        return grid

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "SweepConfig":
        return cls(**load_flat_config(path))


class WalkRequest(BaseModel):
    """Walk parameters plus Monte Carlo settings."""

    model_config = ConfigDict(extra="forbid")

    M: int = Field(..., ge=0)
    K: float = Field(..., gt=0)
    rho: float = Field(..., gt=0, le=1)
    beta: float = Field(..., gt=0)
    steps: int = Field(default=1_000_000, ge=1)
    seed: int = Field(default=0, ge=0)
    deltas: List[float] = Field(default_factory=lambda: [0.05, 0.2])


class LemmaRequest(BaseModel):
    """Which lemma checks to run."""

    model_config = ConfigDict(extra="forbid")

    lemmas: List[LemmaName] = Field(default_factory=lambda: list(LemmaName))
    trials: Optional[int] = Field(default=None, ge=1, description="Trial count for every lemma (per-lemma default when omitted)")
    seed: int = Field(default=0, ge=0)


class ExperimentReport(BaseModel):
    """Output of run_experiment."""
    config: Dict[str, Any]
    defaults: Dict[str, Any]
    seeds: List[int]
    runs: List[Dict[str, Any]]
    aggregate: Dict[str, Any]
    outputs: Dict[str, str] = Field(default_factory=dict)


class LemmaResult(BaseModel):
    """Outcome of one lemma check."""
    lemma: LemmaName
    trials: int
    successes: int
    frequency: float = Field(..., description="Success frequency (failure frequency for random-m)")
    threshold: Optional[float] = Field(
        default=None, description="Frequency the check must reach (at most, for random-m); None when a mean is tested"
    )
    passed: bool
    details: Dict[str, Any] = Field(default_factory=dict)


class LemmaReport(BaseModel):
    seed: int
    results: List[LemmaResult]

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)


class AcceptanceRequest(BaseModel):
    """Which acceptance criteria to evaluate, and at what scale."""

    model_config = ConfigDict(extra="forbid")

    criteria: List[int] = Field(
        default_factory=lambda: list(range(1, 11)), min_length=1, description="Criterion numbers 1..10"
    )
    T: Optional[int] = Field(default=None, ge=1, description="Horizon for every run (per-p default when omitted)")
    replications: int = Field(default=20, ge=1)
    base_seed: int = Field(default=0, ge=0)
    workers: int = Field(default=1, ge=1)
    walk_steps: int = Field(default=1_000_000, ge=1, description="Monte Carlo steps per walk grid point")
    lemma_trials: Optional[int] = Field(default=None, ge=1, description="Trial count for every lemma (per-lemma default when omitted)")
    output_dir: Optional[Path] = None

    @field_validator("criteria")
    @classmethod
    def _check_criteria(cls, criteria: List[int]) -> List[int]:
        unknown = sorted(set(criteria) - set(range(1, 11)))
        if unknown:
            raise ValueError(f"unknown acceptance criteria {unknown}; choose from 1..10")
        return sorted(set(criteria))


class CriterionResult(BaseModel):
    """Outcome of one acceptance criterion."""
    criterion: int
    name: str
    passed: bool
    observed: Dict[str, Any] = Field(default_factory=dict)
    failures: List[str] = Field(default_factory=list, description="One line per failed condition")


class AcceptanceReport(BaseModel):
    horizon: Optional[int]
    replications: int
    base_seed: int
    results: List[CriterionResult]

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)



def load_flat_config(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Read a flat `key: value` file.

    Lists of scalars are allowed (sweep grids); mappings are not.

    Raises:
        ConfigError: unreadable file, non-mapping document or nested mapping value
    """
    path = Path(path)
    try:
        loaded = yaml.safe_load(path.read_text())
    except (OSError, yaml.YAMLError) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    if loaded is None:
        return {}
    if not isinstance(loaded, dict):
        raise ConfigError(f"config {path} must be a flat key: value mapping")
    for key, value in loaded.items():
        if isinstance(value, dict) or (isinstance(value, list) and any(isinstance(v, (dict, list)) for v in value)):
            raise ConfigError(f"config key {key!r} has a nested value")
    return loaded
