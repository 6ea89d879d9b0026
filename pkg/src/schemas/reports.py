from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field

Point = Tuple[float, float]


class ViolationRecord(BaseModel):
    kind: Literal["cu_sinr", "mg_sinr", "c1_power", "c3_channels"]
    index: int
    value: float
    threshold: float


class DeltaRateRecord(BaseModel):
    mg: int
    channel: int
    delta_bps: float


class RateReport(BaseModel):
    cu_sinr: List[float]
    mg_worst_sinr: List[float]
    cu_rate: List[float]
    mg_rate: List[float]
    standalone_cu_rate: List[float]
    delta_rate: List[DeltaRateRecord]
    objective: float
    c2_violations: List[ViolationRecord]
    structural_violations: List[ViolationRecord] = Field(default_factory=list)

    @property
    def has_cu_violation(self) -> bool:
        return any(v.kind == "cu_sinr" for v in self.c2_violations)

    @property
    def has_mg_violation(self) -> bool:
        return any(v.kind == "mg_sinr" for v in self.c2_violations)


class OuterIterationRecord(BaseModel):
    iter: int
    gamma_th: float
    flag: int
    colors_unique: int
    edges: int
    rounds: int


class PowerTraceRecord(BaseModel):
    iter: int
    p_min_dbm: float
    p_max_dbm: float
    unassigned_count: int
    aggregate_interference_mw: float


class ScenarioDump(BaseModel):
    seed: int
    bs_position: Point
    cu_positions: List[Point]
    mgtx_positions: List[Point]
    mgrx_positions: List[List[Point]]
    resampled_groups: int


class GainTableDump(BaseModel):
    h_cb: List[float]
    h_gb: List[List[float]]
    h_gr: List[List[List[List[float]]]]
    h_cr: List[List[List[float]]]


class OracleResult(BaseModel):
    assignment: List[Optional[int]]
    powers_mw: List[float]
    objective_bps: float
    evaluated: int


class ResultRow(BaseModel):
    axis: str
    axis_value: float
    scheme_channel: str
    scheme_power: str
    mean_objective_bps: float
    ci95_bps: float = Field(ge=0)
    mean_cu_rate_bps: float
    mean_mg_rate_bps: float
    violation_rate: float = Field(ge=0, le=1)
    mean_outer_iters: float
    mean_color_rounds: float
    mean_power_iters: float
    excluded_mg_fraction: float
    instances: int
    skipped: int


RESULT_COLUMNS = list(ResultRow.model_fields)


class SchemeRunReport(BaseModel):
    scheme: str
    channels: List[int]
    powers_mw: List[float]
    report: RateReport
    channel_trace: List[OuterIterationRecord] = Field(default_factory=list)
    power_traces: List[List[PowerTraceRecord]] = Field(default_factory=list)


class SingleRunReport(BaseModel):
    seed: int
    scenario: ScenarioDump
    gains: GainTableDump
    schemes: List[SchemeRunReport]


class OracleGapRow(BaseModel):
    scheme: str
    objective_bps: float
    ratio: float
    budget_feasible: bool


class OracleGapReport(BaseModel):
    seed: int
    n_cu: int
    n_mg: int
    power_grid_mw: List[float]
    optimum: OracleResult
    rows: List[OracleGapRow]
