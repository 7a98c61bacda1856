"""
Experiment Workflow - LangGraph

Responsible for:
- Orchestrating one experiment as validate -> simulate -> aggregate -> persist
- Fanning replications out to worker processes and restoring replication order
- Writing summary.json, pernode.csv and trace.csv
"""

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, TypedDict, Union

from langgraph.graph import END, StateGraph

from ..config.simulation_config import PolicyName, SimulationConfig
from ..errors import ConfigError
from ..metrics.summary import aggregate_summaries
from .models import ExperimentConfig, ExperimentReport
from .runner import ReplicationResult, run_replication, write_pernode, write_trace

logger = logging.getLogger(__name__)


class ExperimentState(TypedDict):
    """State schema for the experiment workflow."""
    config: ExperimentConfig
    results: List[ReplicationResult]
    aggregate: Optional[Dict[str, Any]]
    report: Optional[ExperimentReport]


class ExperimentWorkflow:
    """
    Runs an ExperimentConfig through a compiled LangGraph workflow.

    The same config always yields the same report and the same output bytes;
    replication results are sorted by index before anything is aggregated.
    """

    def __init__(self):
        self.workflow = self._build_workflow()

    def _build_workflow(self):
        """
        Build the LangGraph workflow with nodes and edges.

        Returns:
            Compiled LangGraph workflow
        """
        workflow = StateGraph(ExperimentState)

        workflow.add_node("validate", self._validate_node)
        workflow.add_node("simulate", self._simulate_node)
        workflow.add_node("aggregate", self._aggregate_node)
        workflow.add_node("persist", self._persist_node)

        workflow.add_edge("validate", "simulate")
        workflow.add_edge("simulate", "aggregate")
        workflow.add_edge("aggregate", "persist")
        workflow.add_edge("persist", END)

        workflow.set_entry_point("validate")

        return workflow.compile()

    def _validate_node(self, state: ExperimentState) -> ExperimentState:
        config = state["config"]
        if config.policy is PolicyName.CLEAR_ALL and config.p < SimulationConfig.CLEAR_ALL_MIN_P:
            logger.warning(
                f"CLEAR-ALL at p={config.p} is below {SimulationConfig.CLEAR_ALL_MIN_P}; Hamiltonian checks may be slow"
            )
        if config.output_dir is not None:
            try:
                config.output_dir.mkdir(parents=True, exist_ok=True)
            except OSError as e:
                logger.error(f"Cannot create output directory {config.output_dir}: {e}")
                raise ConfigError(f"output directory {config.output_dir} is not writable: {e}") from e
        logger.info(
            f"Experiment: {config.policy.value}, p={config.p}, T={config.horizon}, "
            f"{config.replications} replication(s), seed {config.base_seed}"
        )
        return state

    def _simulate_node(self, state: ExperimentState) -> ExperimentState:
        config = state["config"]
        indices = range(config.replications)
        if config.workers > 1 and config.replications > 1:
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                results = list(pool.map(run_replication, [config] * config.replications, indices))
        else:
            results = [run_replication(config, r) for r in indices]
        state["results"] = sorted(results, key=lambda result: result.replication)
        logger.info(f"Completed {len(results)} replication(s)")
        return state

    def _aggregate_node(self, state: ExperimentState) -> ExperimentState:
        results = state["results"]
        aggregate = aggregate_summaries([result.summary for result in results])
        probes = [result.additional_wait for result in results if result.additional_wait is not None]
        aggregate["additional_wait"] = sum(probes) / len(probes) if probes else None
        state["aggregate"] = aggregate
        logger.info(
            f"Mean wait {aggregate['mean_wait']:.3f} "
            f"(95% CI {aggregate['mean_wait_ci'][0]:.3f}..{aggregate['mean_wait_ci'][1]:.3f})"
        )
        return state

    def _persist_node(self, state: ExperimentState) -> ExperimentState:
        config = state["config"]
        results = state["results"]
        report = ExperimentReport(
            config=config.model_dump(mode="json", exclude={"output_dir", "workers"}),
            defaults=SimulationConfig.get_defaults(),
            seeds=[result.seed for result in results],
            runs=[
                {"replication": result.replication, "additional_wait": result.additional_wait, **result.summary.scalars()}
                for result in results
            ],
            aggregate=state["aggregate"],
        )

        if config.output_dir is not None:
            out = config.output_dir
            report.outputs = {
                "summary": str(out / SimulationConfig.SUMMARY_FILE),
                "pernode": str(write_pernode(results, out / SimulationConfig.PERNODE_FILE)),
                "trace": str(write_trace(results, out / SimulationConfig.TRACE_FILE)),
            }
            write_json(report.model_dump(mode="json", exclude={"outputs"}), out / SimulationConfig.SUMMARY_FILE)
            logger.info(f"Results written to {out}")

        state["report"] = report
        return state

    def run(self, config: ExperimentConfig) -> ExperimentReport:
        state = ExperimentState(config=config, results=[], aggregate=None, report=None)
        result = self.workflow.invoke(state)
        return result["report"]


def run_experiment(config: Union[ExperimentConfig, Dict[str, Any]]) -> ExperimentReport:
    """
    Run every replication of an experiment and aggregate them.

    Args:
        config: ExperimentConfig or its dict form

    Returns:
        ExperimentReport (also persisted when output_dir is set)
    """
    if not isinstance(config, ExperimentConfig):
        config = ExperimentConfig(**config)
    return ExperimentWorkflow().run(config)


def write_json(payload: Dict[str, Any], path: Union[str, Path]) -> Path:
    """Deterministic JSON dump used for every report file."""
    path = Path(path)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path
