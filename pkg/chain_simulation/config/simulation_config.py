"""
Simulation Configuration

Centralized configuration for policies, horizons, search limits and output files.
"""

import math
from enum import Enum
from typing import Any, Dict


class PolicyName(Enum):
    """Matching policies the simulator can run."""
    GREEDY = "greedy"
    CLEAR_ALL = "clear-all"
    BATCH = "batch"
    NASP = "nasp"
    GREEDY_BATCH = "greedy-batch"
    MULTI_GREEDY = "multi-greedy"


class TieBreak(Enum):
    """How multi-donor greedy picks among chains that can take an arrival."""
    LOWEST_INDEX = "lowest-index"
    RANDOM = "random"


class ScalingModel(Enum):
    """Waiting-time scaling laws fitted across a p grid."""
    ONE_OVER_P = "one-over-p"
    ONE_OVER_P_LOG = "one-over-p-log"


class DonorRule(Enum):
    """How a sweep sets the donor count R at each grid point."""
    FIXED = "fixed"
    ONE_OVER_P = "one-over-p"
    ONE_OVER_P_LOG = "one-over-p-log"


class LemmaName(Enum):
    """Probabilistic statements checked by the lemma verifier."""
    RANDOM_M = "random-m"
    DFS_PATH = "dfs-path"
    START_NODES = "start-nodes"
    GNP_PATH = "gnp-path"
    CLAIM_LONG_PATH = "claim-long-path"


class SimulationConfig:
    """Configuration class for simulation and experiment defaults."""

    # Policy parameters
    DEFAULT_C = {
        PolicyName.BATCH: 12.0,
        PolicyName.GREEDY_BATCH: 12.0,
        PolicyName.NASP: 120.0,
    }
    DEFAULT_DONORS = 1
    DEFAULT_TIE_BREAK = TieBreak.LOWEST_INDEX

    # Horizon and burn-in
    MIN_HORIZON = 100_000
    HORIZON_SCALE = 200
    HARNESS_BURN_IN = 0.2
    WALK_BURN_IN = 0.5

    # CLEAR-ALL sweeps stay where the Hamiltonian heuristic is reliable
    CLEAR_ALL_MIN_P = 0.05

    # Exhaustive search limits (vertices)
    EXACT_HAMILTONIAN_LIMIT = 20
    BRUTE_FORCE_LIMIT = 16
    SUBSET_CHECK_LIMIT = 16

    # Random-walk solver
    ROOT_TOLERANCE = 1e-12
    ROOT_MAX_ITER = 200
    BETA_PRIME_LIMIT = 3 / 5
    BETA_LIMIT = 3 / 5

    # Output files
    SUMMARY_FILE = "summary.json"
    PERNODE_FILE = "pernode.csv"
    TRACE_FILE = "trace.csv"
    SWEEP_FILE = "sweep.csv"
    LEMMAS_FILE = "lemmas.json"
    ACCEPTANCE_FILE = "acceptance.json"

    @classmethod
    def default_horizon(cls, p: float) -> int:
        """Horizon long enough for stationary behaviour to dominate the transient."""
        scaled = cls.HORIZON_SCALE * (1.0 / p) * math.log(1.0 / p)
        return max(cls.MIN_HORIZON, math.ceil(scaled))

    @classmethod
    def default_c(cls, policy: PolicyName) -> float:
        """Default phase parameter c for a policy (0.0 when unused)."""
        return cls.DEFAULT_C.get(policy, 0.0)

    @classmethod
    def greedy_donor_count(cls, p: float) -> int:
        """Donor count R = ceil((1/p) ln(1/p)) used for the constant-wait regime."""
        return math.ceil((1.0 / p) * math.log(1.0 / p))

    @classmethod
    def donor_count(cls, rule: DonorRule, p: float, fixed: int = DEFAULT_DONORS) -> int:
        """Donor count for a grid point: fixed, ceil(1/p) or ceil((1/p) ln(1/p))."""
        if rule is DonorRule.ONE_OVER_P:
            return math.ceil(1.0 / p)
        if rule is DonorRule.ONE_OVER_P_LOG:
            return cls.greedy_donor_count(p)
        return fixed

    @classmethod
    def get_defaults(cls) -> Dict[str, Any]:
        """Get the resolved defaults as a plain dictionary (for provenance)."""
        return {
            "default_c": {policy.value: c for policy, c in cls.DEFAULT_C.items()},
            "default_donors": cls.DEFAULT_DONORS,
            "default_tie_break": cls.DEFAULT_TIE_BREAK.value,
            "min_horizon": cls.MIN_HORIZON,
            "horizon_scale": cls.HORIZON_SCALE,
            "harness_burn_in": cls.HARNESS_BURN_IN,
            "walk_burn_in": cls.WALK_BURN_IN,
            "clear_all_min_p": cls.CLEAR_ALL_MIN_P,
            "exact_hamiltonian_limit": cls.EXACT_HAMILTONIAN_LIMIT,
            "brute_force_limit": cls.BRUTE_FORCE_LIMIT,
        }
