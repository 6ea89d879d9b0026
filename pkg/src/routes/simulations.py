from typing import Any, Dict

from fastapi import APIRouter, HTTPException
from pydantic import ValidationError

from baselines.oracle import OracleGuardError
from config import load_sim_config
from harness.instance import DegenerateScenarioError
from harness.single import run_oracle, run_single
from schemas.reports import OracleGapReport
from schemas.service import (
    ConfigValidationResponse,
    InstanceRequest,
    InstanceResponse,
    OracleRequest,
    SchemeSummary,
)
from schemas.simulation import SimConfig

router = APIRouter(tags=["Simulator"])


def _merge_config(overrides: Dict[str, Any]) -> SimConfig:
    defaults = load_sim_config()
    try:
        return SimConfig.model_validate({**defaults.model_dump(), **overrides})
    except ValidationError as exc:
        raise HTTPException(status_code=422, detail=exc.errors(include_url=False, include_context=False))


@router.get("/config/defaults", response_model=SimConfig)
async def get_default_config():
    return load_sim_config()


@router.post("/config/validate", response_model=ConfigValidationResponse)
async def validate_config(overrides: Dict[str, Any]):
    return {"valid": True, "config": _merge_config(overrides)}


@router.post("/instances/", response_model=InstanceResponse)
def evaluate_instance(request: InstanceRequest):
    config = _merge_config(request.overrides)
    try:
        result = run_single(config, request.seed, request.scheme_ids())
    except DegenerateScenarioError:
        raise HTTPException(status_code=422, detail="Scenario has no CUs or no MGs.")

    return InstanceResponse(
        seed=result.seed,
        n_cu=len(result.scenario.cu_positions),
        n_mg=len(result.scenario.mgtx_positions),
        schemes=[SchemeSummary(**scheme.model_dump()) for scheme in result.schemes],
    )


@router.post("/oracle/", response_model=OracleGapReport)
def evaluate_oracle(request: OracleRequest):
    config = _merge_config(request.overrides)
    try:
        return run_oracle(
            config,
            request.seed,
            request.scheme_ids(),
            max_cus=request.max_cus,
            max_mgs=request.max_mgs,
            grid_levels=request.grid_levels,
        )
    except DegenerateScenarioError:
        raise HTTPException(status_code=422, detail="Scenario has no CUs or no MGs.")
    except OracleGuardError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
