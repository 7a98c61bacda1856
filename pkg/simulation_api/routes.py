"""
Simulation API Routes

FastAPI routes for experiments, random-walk reports and lemma checks.
"""

import logging

from fastapi import APIRouter, HTTPException
from pydantic import ValidationError

from chain_simulation.errors import ChainSimulationError, ConfigError, RegimeError
from chain_simulation.harness.lemmas import verify_lemmas
from chain_simulation.harness.models import ExperimentConfig, LemmaRequest, WalkRequest
from chain_simulation.harness.walk_report import build_walk_report
from chain_simulation.harness.workflow import run_experiment

from .models import APIResponse, LemmaQuery, SimulateRequest, WalkQuery

logger = logging.getLogger(__name__)

# Create router
router = APIRouter(tags=["Simulation"])

@router.post("/simulate", response_model=APIResponse)
def simulate(request: SimulateRequest) -> APIResponse:
    """Run one experiment and return its aggregate."""
    try:
        config = ExperimentConfig(**request.model_dump(exclude_none=True))
        report = run_experiment(config)
        return APIResponse(
            success=True,
            data={"aggregate": report.aggregate, "seeds": report.seeds, "config": report.config},
            status_code=200,
        )
    except (ValidationError, ConfigError) as e:
        logger.error(f"Invalid experiment request: {e}")
        raise HTTPException(status_code=400, detail=str(e))
    except ChainSimulationError as e:
        logger.error(f"Error running experiment: {e}")
        raise HTTPException(status_code=500, detail=str(e))

@router.post("/walk", response_model=APIResponse)
def walk(request: WalkQuery) -> APIResponse:
    """Bounds, roots and Monte Carlo statistics for one walk."""
    try:
        report = build_walk_report(WalkRequest(**request.model_dump()))
        return APIResponse(success=True, data=report.model_dump(mode="json"), status_code=200)
    except (ValidationError, RegimeError) as e:
        logger.error(f"Invalid walk request: {e}")
        raise HTTPException(status_code=400, detail=str(e))

@router.post("/verify-lemmas", response_model=APIResponse)
def lemmas(request: LemmaQuery) -> APIResponse:
    """Run the selected lemma checks."""
    try:
        query = LemmaRequest(**request.model_dump())
        report = verify_lemmas(query.lemmas, trials=query.trials, seed=query.seed)
        return APIResponse(
            success=report.passed,
            data=report.model_dump(mode="json"),
            error=None if report.passed else "at least one lemma check failed",
            status_code=200,
        )
    except ValidationError as e:
        logger.error(f"Invalid lemma request: {e}")
        raise HTTPException(status_code=400, detail=str(e))
    except ChainSimulationError as e:
        logger.error(f"Error checking lemmas: {e}")
        raise HTTPException(status_code=500, detail=str(e))
