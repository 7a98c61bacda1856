"""
Acceptance Checks

Responsible for:
- Running the fixed policy and p grids behind each desk-scale acceptance criterion
- Sharing runs between criteria that need the same (policy, p, c, donors)
- Reporting the observed values and every failed condition per criterion

The evaluate_* functions only compare numbers; run_acceptance gathers those
numbers from real experiments.
"""

import logging
import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..config.simulation_config import DonorRule, PolicyName, ScalingModel, SimulationConfig
from ..errors import ChainSimulationError
from ..metrics.scaling import fit_scaling
from ..randwalk.walk import root_function
from .lemmas import verify_lemmas
from .models import (
    AcceptanceReport,
    AcceptanceRequest,
    CriterionResult,
    ExperimentConfig,
    ExperimentReport,
    LemmaReport,
)
from .walk_report import WalkReport, build_grid_report
from .workflow import run_experiment, write_json

logger = logging.getLogger(__name__)

CRITERION_NAMES = {
    1: "waiting-queue-identity",
    2: "lower-bound",
    3: "greedy-scaling",
    4: "batch-scaling",
    5: "greedy-batch",
    6: "clear-all-phases",
    7: "nasp-phases",
    8: "multi-donor",
    9: "walk-bounds",
    10: "lemmas",
}

LOWER_BOUND_POLICIES = (
    PolicyName.GREEDY,
    PolicyName.BATCH,
    PolicyName.NASP,
    PolicyName.GREEDY_BATCH,
    PolicyName.CLEAR_ALL,
)
LOWER_BOUND_GRID = (0.05, 0.1, 0.2)
SCALING_GRID = (0.02, 0.05, 0.1, 0.2)
CLEAR_ALL_GRID = (0.05, 0.1)
MULTI_DONOR_GRID = (0.05, 0.1)

LOWER_BOUND_FACTOR = 0.45
MULTI_DONOR_FACTOR = 0.3
MAX_SPREAD = 2.0
CLEAR_BAND = (0.3, 5.0)
MIN_CLEARS = 20
NASP_C = 120.0
NASP_P = 0.1
NASP_PHASE_FACTOR = 1.25
MIN_NASP_PHASES = 30
ROOT_RESIDUAL = 1e-12
RECURRENCE_RESIDUAL = 1e-9

MeanWaits = Dict[float, float]


def log_scale(p: float) -> float:
    """(1/p) ln(1/p)."""
    return (1.0 / p) * math.log(1.0 / p)


def spread(values: Sequence[float]) -> float:
    """Largest over smallest of positive values (inf when any is not positive)."""
    low = min(values)
    return max(values) / low if low > 0 else math.inf


def _key(p: float) -> str:
    return f"{p:g}"


def _result(criterion: int, observed: Dict, failures: List[str]) -> CriterionResult:
    return CriterionResult(
        criterion=criterion,
        name=CRITERION_NAMES[criterion],
        passed=not failures,
        observed=observed,
        failures=failures,
    )


def evaluate_identity(runs: Sequence[Dict]) -> CriterionResult:
    """Total waiting equals total queue occupancy in every run summary."""
    failures = []
    for index, run in enumerate(runs):
        occupancy = round(run["mean_queue"] * run["horizon"])
        if run["total_wait"] != occupancy:
            failures.append(f"run {index}: sum of waits {run['total_wait']} != sum of queue sizes {occupancy}")
    return _result(1, {"runs": len(runs)}, failures)


def evaluate_lower_bound(means: Dict[PolicyName, MeanWaits]) -> CriterionResult:
    """Every policy waits at least 0.45/p on average."""
    failures = []
    for policy, by_p in means.items():
        for p, mean in sorted(by_p.items()):
            bound = LOWER_BOUND_FACTOR / p
            if mean < bound:
                failures.append(f"{policy.value} at p={p:g}: mean wait {mean:.3f} < {bound:.3f}")
    observed = {policy.value: {_key(p): mean for p, mean in sorted(by_p.items())} for policy, by_p in means.items()}
    return _result(2, observed, failures)


def evaluate_greedy_scaling(greedy: MeanWaits) -> CriterionResult:
    """Greedy tracks (1/p) ln(1/p): stable ratio and the better of the two fits."""
    ratios = {p: mean / log_scale(p) for p, mean in sorted(greedy.items())}
    points = sorted(greedy.items())
    residuals = {model.value: fit_scaling(points, model).residual for model in ScalingModel}
    failures = []
    ratio_spread = spread(list(ratios.values()))
    if ratio_spread >= MAX_SPREAD:
        failures.append(f"mean wait / ((1/p) ln(1/p)) varies by {ratio_spread:.3f}x")
    if not residuals[ScalingModel.ONE_OVER_P_LOG.value] < residuals[ScalingModel.ONE_OVER_P.value]:
        failures.append(f"the (1/p) ln(1/p) fit is not better than the 1/p fit: {residuals}")
    observed = {
        "ratios": {_key(p): ratio for p, ratio in ratios.items()},
        "spread": ratio_spread,
        "residuals": residuals,
    }
    return _result(3, observed, failures)


def evaluate_batch_scaling(batch: MeanWaits, greedy: MeanWaits) -> CriterionResult:
    """Batch tracks 1/p and beats Greedy at the smallest p."""
    ratios = {p: mean * p for p, mean in sorted(batch.items())}
    failures = []
    ratio_spread = spread(list(ratios.values()))
    if ratio_spread >= MAX_SPREAD:
        failures.append(f"mean wait / (1/p) varies by {ratio_spread:.3f}x")
    smallest = min(batch)
    if not batch[smallest] < greedy[smallest]:
        failures.append(f"at p={smallest:g} batch waits {batch[smallest]:.3f}, greedy {greedy[smallest]:.3f}")
    observed = {
        "ratios": {_key(p): ratio for p, ratio in ratios.items()},
        "spread": ratio_spread,
        "batch_at_smallest_p": batch[smallest],
        "greedy_at_smallest_p": greedy[smallest],
    }
    return _result(4, observed, failures)


def evaluate_greedy_batch(greedy_batch: MeanWaits, batch: MeanWaits, fair_path_runs: Dict[float, int]) -> CriterionResult:
    """
    Greedy-Batch within 2x of Batch at every p. Responsiveness is enforced by
    the policy's per-step check, so a completed run already satisfied it.
    """
    failures = []
    for p, mean in sorted(greedy_batch.items()):
        gap = spread([mean, batch[p]])
        if gap > MAX_SPREAD:
            failures.append(f"p={p:g}: greedy-batch {mean:.3f} vs batch {batch[p]:.3f} ({gap:.3f}x)")
    observed = {
        "greedy_batch": {_key(p): mean for p, mean in sorted(greedy_batch.items())},
        "batch": {_key(p): batch[p] for p in sorted(greedy_batch)},
        "fair_path_runs": {_key(p): count for p, count in sorted(fair_path_runs.items())},
        "responsive": True,
    }
    return _result(5, observed, failures)


def evaluate_clear_all(clears: Dict[float, Tuple[int, Optional[float]]]) -> CriterionResult:
    """At least 20 clears per p, spaced inside [0.3, 5] x (1/p) ln(1/p) on average."""
    failures = []
    observed = {}
    for p, (count, mean_gap) in sorted(clears.items()):
        low, high = (factor * log_scale(p) for factor in CLEAR_BAND)
        observed[_key(p)] = {"clears": count, "mean_gap": mean_gap, "band": [low, high]}
        if count < MIN_CLEARS:
            failures.append(f"p={p:g}: only {count} clears")
        if mean_gap is None or not low <= mean_gap <= high:
            failures.append(f"p={p:g}: mean gap {mean_gap} outside [{low:.3f}, {high:.3f}]")
    return _result(6, observed, failures)


def evaluate_nasp(
    phases: int, mean_phase: Optional[float], min_extension: Optional[int], c: float = NASP_C, p: float = NASP_P
) -> CriterionResult:
    """At least 30 phases lasting at most 1.25 c/p on average, every extension of at least c/p nodes."""
    limit = NASP_PHASE_FACTOR * c / p
    threshold = math.ceil(c / p)
    failures = []
    if phases < MIN_NASP_PHASES:
        failures.append(f"only {phases} phases")
    if mean_phase is None or mean_phase > limit:
        failures.append(f"mean phase length {mean_phase} above {limit:.3f}")
    if min_extension is None or min_extension < threshold:
        failures.append(f"shortest extension {min_extension} below {threshold}")
    observed = {
        "phases": phases,
        "mean_phase_length": mean_phase,
        "phase_limit": limit,
        "min_extension_length": min_extension,
        "threshold": threshold,
    }
    return _result(7, observed, failures)


def evaluate_multi_donor(sparse: MeanWaits, dense: MeanWaits) -> CriterionResult:
    """
    ceil(1/p) donors still wait at least 0.3/p; ceil((1/p) ln(1/p)) donors
    wait about the same at every p.
    """
    failures = []
    for p, mean in sorted(sparse.items()):
        bound = MULTI_DONOR_FACTOR / p
        if mean < bound:
            failures.append(f"R=ceil(1/p) at p={p:g}: mean wait {mean:.3f} < {bound:.3f}")
    dense_spread = spread(list(dense.values()))
    if dense_spread > MAX_SPREAD:
        failures.append(f"R=ceil((1/p) ln(1/p)) mean waits vary by {dense_spread:.3f}x")
    observed = {
        "one_over_p": {_key(p): mean for p, mean in sorted(sparse.items())},
        "one_over_p_log": {_key(p): mean for p, mean in sorted(dense.items())},
        "one_over_p_log_spread": dense_spread,
    }
    return _result(8, observed, failures)


def evaluate_walk(reports: Sequence[WalkReport]) -> CriterionResult:
    """Monte Carlo checks, recurrence residual and root accuracy at every grid point."""
    failures = []
    for report in reports:
        label = ",".join(f"{key}={value:g}" for key, value in report.params.items())
        failures.extend(f"{label}: {error}" for error in report.errors)
        failures.extend(f"{label}: check {name} failed" for name, ok in report.checks.items() if not ok)
        if report.recurrence_residual is None or report.recurrence_residual > RECURRENCE_RESIDUAL:
            failures.append(f"{label}: recurrence residual {report.recurrence_residual}")
        if report.x is None:
            continue
        low, high = report.bracket
        if not low <= report.x <= high:
            failures.append(f"{label}: root {report.x} outside [{low}, {high}]")
        if abs(root_function(report.x, report.beta_prime)) > ROOT_RESIDUAL:
            failures.append(f"{label}: root residual above {ROOT_RESIDUAL}")
    observed = {"points": len(reports), "checks": sum(len(report.checks) for report in reports)}
    return _result(9, observed, failures)


def evaluate_lemmas(report: LemmaReport) -> CriterionResult:
    failures = [
        f"{result.lemma.value}: {result.successes}/{result.trials} (frequency {result.frequency:.4f})"
        for result in report.results
        if not result.passed
    ]
    observed = {result.lemma.value: result.frequency for result in report.results}
    return _result(10, observed, failures)


class AcceptanceRun:
    """Experiments behind the criteria, each run at most once per acceptance pass."""

    def __init__(self, request: AcceptanceRequest):
        self.request = request
        self._reports: Dict[Tuple[PolicyName, float, Optional[float], int], ExperimentReport] = {}

    def experiment(self, policy: PolicyName, p: float, c: Optional[float] = None, donors: int = 1) -> ExperimentReport:
        if c is None:
            c = SimulationConfig.DEFAULT_C.get(policy)
        key = (policy, p, c, donors)
        if key not in self._reports:
            config = ExperimentConfig(
                policy=policy,
                p=p,
                c=c,
                donors=donors,
                T=self.request.T,
                replications=self.request.replications,
                base_seed=self.request.base_seed,
                workers=self.request.workers,
            )
            self._reports[key] = run_experiment(config)
        return self._reports[key]

    def mean_waits(self, policy: PolicyName, grid: Sequence[float], **kwargs) -> MeanWaits:
        return {p: self.experiment(policy, p, **kwargs).aggregate["mean_wait"] for p in grid}

    def extras_count(self, policy: PolicyName, p: float, key: str) -> int:
        return sum(run["extras"].get(key, {}).get("count", 0) for run in self.experiment(policy, p).runs)


def _identity(run: AcceptanceRun) -> CriterionResult:
    reports = [run.experiment(PolicyName.GREEDY, p) for p in LOWER_BOUND_GRID]
    return evaluate_identity([summary for report in reports for summary in report.runs])


def _lower_bound(run: AcceptanceRun) -> CriterionResult:
    return evaluate_lower_bound({policy: run.mean_waits(policy, LOWER_BOUND_GRID) for policy in LOWER_BOUND_POLICIES})


def _greedy_scaling(run: AcceptanceRun) -> CriterionResult:
    return evaluate_greedy_scaling(run.mean_waits(PolicyName.GREEDY, SCALING_GRID))


def _batch_scaling(run: AcceptanceRun) -> CriterionResult:
    return evaluate_batch_scaling(
        run.mean_waits(PolicyName.BATCH, SCALING_GRID), run.mean_waits(PolicyName.GREEDY, SCALING_GRID)
    )


def _greedy_batch(run: AcceptanceRun) -> CriterionResult:
    return evaluate_greedy_batch(
        run.mean_waits(PolicyName.GREEDY_BATCH, SCALING_GRID),
        run.mean_waits(PolicyName.BATCH, SCALING_GRID),
        {p: run.extras_count(PolicyName.GREEDY_BATCH, p, "fair_path_extension_lengths") for p in SCALING_GRID},
    )


def _clear_all(run: AcceptanceRun) -> CriterionResult:
    clears = {}
    for p in CLEAR_ALL_GRID:
        aggregate = run.experiment(PolicyName.CLEAR_ALL, p).aggregate
        clears[p] = (aggregate["phases"], aggregate["mean_phase_length"])
    return evaluate_clear_all(clears)


def _nasp(run: AcceptanceRun) -> CriterionResult:
    aggregate = run.experiment(PolicyName.NASP, NASP_P, c=NASP_C).aggregate
    return evaluate_nasp(aggregate["phases"], aggregate["mean_phase_length"], aggregate["min_extension_length"])


def _multi_donor(run: AcceptanceRun) -> CriterionResult:
    def waits(rule: DonorRule) -> MeanWaits:
        return {
            p: run.experiment(
                PolicyName.MULTI_GREEDY, p, donors=SimulationConfig.donor_count(rule, p)
            ).aggregate["mean_wait"]
            for p in MULTI_DONOR_GRID
        }

    return evaluate_multi_donor(waits(DonorRule.ONE_OVER_P), waits(DonorRule.ONE_OVER_P_LOG))


def _walk(run: AcceptanceRun) -> CriterionResult:
    return evaluate_walk(build_grid_report(run.request.walk_steps, seed=run.request.base_seed))


def _lemmas(run: AcceptanceRun) -> CriterionResult:
    return evaluate_lemmas(verify_lemmas(trials=run.request.lemma_trials, seed=run.request.base_seed))


CRITERIA: Dict[int, Callable[[AcceptanceRun], CriterionResult]] = {
    1: _identity,
    2: _lower_bound,
    3: _greedy_scaling,
    4: _batch_scaling,
    5: _greedy_batch,
    6: _clear_all,
    7: _nasp,
    8: _multi_donor,
    9: _walk,
    10: _lemmas,
}


def run_acceptance(request: AcceptanceRequest) -> AcceptanceReport:
    """
    Evaluate the requested criteria.

    A simulation error inside a criterion fails that criterion and the pass
    moves on to the next one. The report is written to acceptance.json when
    output_dir is set.

    Args:
        request: criteria and run scale

    Returns:
        AcceptanceReport
    """
    run = AcceptanceRun(request)
    results = []
    for criterion in request.criteria:
        try:
            result = CRITERIA[criterion](run)
        except ChainSimulationError as e:
            logger.error(f"Criterion {criterion} ({CRITERION_NAMES[criterion]}) raised {type(e).__name__}: {e}")
            result = CriterionResult(
                criterion=criterion,
                name=CRITERION_NAMES[criterion],
                passed=False,
                failures=[f"{type(e).__name__}: {e}"],
            )
        level = logging.INFO if result.passed else logging.WARNING
        logger.log(level, f"Criterion {criterion} ({result.name}): {'pass' if result.passed else 'FAIL'}")
        for failure in result.failures:
            logger.log(level, f"  {failure}")
        results.append(result)

    report = AcceptanceReport(
        horizon=request.T, replications=request.replications, base_seed=request.base_seed, results=results
    )
    if request.output_dir is not None:
        request.output_dir.mkdir(parents=True, exist_ok=True)
        write_json(report.model_dump(mode="json"), request.output_dir / SimulationConfig.ACCEPTANCE_FILE)
        logger.info(f"Acceptance report written to {request.output_dir}")
    return report
