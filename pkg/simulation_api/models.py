"""
Pydantic Models for the Simulation API

Request and response models for the simulation endpoints.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from chain_simulation.config.simulation_config import LemmaName, PolicyName, SimulationConfig, TieBreak

# Request Models
class SimulateRequest(BaseModel):
    """Request model for one experiment (nothing is written to disk)."""
    policy: PolicyName = Field(..., description="Matching policy")
    p: float = Field(..., description="Edge probability in (0, 1)")
    c: Optional[float] = Field(default=None, description="Phase parameter")
    donors: int = Field(default=SimulationConfig.DEFAULT_DONORS, description="Number of altruistic donors")
    tie_break: TieBreak = Field(default=SimulationConfig.DEFAULT_TIE_BREAK, description="Multi-donor chain choice")
    T: Optional[int] = Field(default=None, description="Horizon")
    replications: int = Field(default=1, description="Number of replications")
    base_seed: int = Field(default=0, description="Base seed")
    probe: Optional[int] = Field(default=None, description="Probe time for the additional-wait statistic")

class WalkQuery(BaseModel):
    """Request model for a random-walk report."""
    M: int = Field(..., description="Floor level")
    K: float = Field(..., description="Down-jump size")
    rho: float = Field(..., description="Down-jump probability")
    beta: float = Field(..., description="Drift margin")
    steps: int = Field(default=200_000, description="Monte Carlo steps")
    seed: int = Field(default=0, description="Walk seed")
    deltas: List[float] = Field(default_factory=lambda: [0.05, 0.2], description="Tail levels")

class LemmaQuery(BaseModel):
    """Request model for lemma checks."""
    lemmas: List[LemmaName] = Field(default_factory=lambda: [LemmaName.RANDOM_M, LemmaName.DFS_PATH], description="Lemmas to check")
    trials: Optional[int] = Field(default=None, description="Trials per lemma")
    seed: int = Field(default=0, description="Seed")

# Response Models
class APIResponse(BaseModel):
    """Generic API response model."""
    success: bool = Field(..., description="Whether the request was successful")
    data: Optional[Dict[str, Any]] = Field(default=None, description="Response data")
    error: Optional[str] = Field(default=None, description="Error message if any")
    status_code: int = Field(..., description="HTTP status code")
