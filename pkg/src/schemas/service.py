from typing import Any, Dict, List

from pydantic import BaseModel, Field, field_validator

from schemas.reports import RateReport, OuterIterationRecord, PowerTraceRecord
from schemas.simulation import SimConfig, SchemeId, parse_schemes

DEFAULT_SCHEMES = ["channel-comparison", "power-comparison"]


class ConfigValidationResponse(BaseModel):
    valid: bool
    config: SimConfig


class InstanceRequest(BaseModel):
    overrides: Dict[str, Any] = Field(default_factory=dict)
    seed: int = Field(0, ge=0)
    schemes: List[str] = Field(default_factory=lambda: list(DEFAULT_SCHEMES))

    @field_validator("schemes")
    @classmethod
    def schemes_are_known(cls, schemes: List[str]) -> List[str]:
        if not schemes:
            raise ValueError("At least one scheme is required")
        for scheme in schemes:
            parse_schemes(scheme)
        return schemes

    def scheme_ids(self) -> List[SchemeId]:
        return parse_schemes(",".join(self.schemes))


class OracleRequest(InstanceRequest):
    max_cus: int = Field(2, ge=1, le=3)
    max_mgs: int = Field(2, ge=1, le=4)
    grid_levels: int = Field(6, ge=2, le=8)


class SchemeSummary(BaseModel):
    scheme: str
    channels: List[int]
    powers_mw: List[float]
    report: RateReport
    channel_trace: List[OuterIterationRecord]
    power_traces: List[List[PowerTraceRecord]]


class InstanceResponse(BaseModel):
    seed: int
    n_cu: int
    n_mg: int
    schemes: List[SchemeSummary]
