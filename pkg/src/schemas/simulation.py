import math
from enum import Enum
from typing import List, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class SimConfig(BaseModel):
    """
    Physical and algorithmic parameters of one simulated cell.

    Keys and units mirror the JSON config documents exactly. Powers and thresholds are
    given in dB/dBm here; the linear views used by the algorithms are exposed as properties.
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    cell_radius: float = Field(500.0, gt=0)
    lambda_cu: float = Field(ge=0)
    lambda_gt: float = Field(ge=0)
    lambda_gr: float = Field(ge=0)
    d_r: float = Field(50.0, gt=0)
    bandwidth_hz: float = Field(1e6, gt=0)
    noise_dbm: float = -114.0
    pathloss_exp: float = Field(3.6, gt=2)
    shadow_sigma_db: float = Field(8.0, ge=0)
    p_c_max_dbm: float = 30.0
    p_g_max_dbm: float = 25.0
    gamma_c_th_db: float = 6.0
    gamma_g_th_db: float = 0.0
    gamma_th_init: float = Field(1e-6, ge=0)
    delta: float = Field(5e-8, gt=0)
    beta_dbm_step: float = Field(1.0, gt=0)
    max_outer_iters: int = Field(50, ge=1)
    refine_colorings: int = Field(10, ge=0)
    max_color_rounds: int = Field(100, ge=1)
    max_power_iters: int = Field(64, ge=1)
    color_choice: Literal["random", "greedy"] = "random"
    power_dynamic_range_db: float = Field(30.0, gt=0)
    min_link_distance_m: float = Field(0.1, gt=0)

    @field_validator(
        "cell_radius", "lambda_cu", "lambda_gt", "lambda_gr", "d_r", "bandwidth_hz", "noise_dbm",
        "pathloss_exp", "shadow_sigma_db", "p_c_max_dbm", "p_g_max_dbm", "gamma_c_th_db",
        "gamma_g_th_db", "gamma_th_init", "delta", "beta_dbm_step", "power_dynamic_range_db",
    )
    @classmethod
    def must_be_finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("Value must be finite")
        return value

    @model_validator(mode="after")
    def power_loop_fits_iteration_cap(self) -> "SimConfig":
        window_steps = math.ceil(self.power_dynamic_range_db / self.beta_dbm_step) + 1
        if window_steps > self.max_power_iters:
            raise ValueError(
                f"max_power_iters={self.max_power_iters} is below the {window_steps} window "
                f"iterations implied by power_dynamic_range_db / beta_dbm_step"
            )
        return self

    @property
    def noise_mw(self) -> float:
        return 10 ** (self.noise_dbm / 10)

    @property
    def p_c_max_mw(self) -> float:
        return 10 ** (self.p_c_max_dbm / 10)

    @property
    def p_g_max_mw(self) -> float:
        return 10 ** (self.p_g_max_dbm / 10)

    @property
    def gamma_c_th(self) -> float:
        return 10 ** (self.gamma_c_th_db / 10)

    @property
    def gamma_g_th(self) -> float:
        return 10 ** (self.gamma_g_th_db / 10)

    @property
    def cell_area_m2(self) -> float:
        return math.pi * self.cell_radius ** 2

    @property
    def cluster_area_m2(self) -> float:
        return math.pi * self.d_r ** 2


class ChannelScheme(str, Enum):
    PROPOSED = "PROPOSED"
    RCA = "RCA"
    GREEDY_IA = "GREEDY_IA"


class PowerScheme(str, Enum):
    PROPOSED = "PROPOSED"
    EPA = "EPA"
    MPA = "MPA"
    WFPA = "WFPA"


BUDGET_COMPLIANT_POWER = frozenset({PowerScheme.PROPOSED, PowerScheme.EPA, PowerScheme.WFPA})


class SchemeId(BaseModel):
    model_config = ConfigDict(frozen=True)

    channel_scheme: ChannelScheme
    power_scheme: PowerScheme

    @property
    def label(self) -> str:
        return f"{self.channel_scheme.value}+{self.power_scheme.value}"

    @classmethod
    def parse(cls, text: str) -> "SchemeId":
        """
        Parse a `CHANNEL+POWER` pair such as `PROPOSED+EPA`.

        :raises ValueError: if either half is not a known scheme.
        """
        channel, sep, power = text.strip().upper().partition("+")
        if not sep:
            raise ValueError(f"Scheme '{text}' must look like CHANNEL+POWER")
        return cls(channel_scheme=ChannelScheme(channel), power_scheme=PowerScheme(power))


SCHEME_PRESETS = {
    "channel-comparison": [
        SchemeId(channel_scheme=channel, power_scheme=PowerScheme.PROPOSED) for channel in ChannelScheme
    ],
    "power-comparison": [
        SchemeId(channel_scheme=ChannelScheme.PROPOSED, power_scheme=power) for power in PowerScheme
    ],
}


def parse_schemes(text: str) -> List[SchemeId]:
    """
    Expand a comma separated scheme list; preset names may be mixed with explicit pairs.
    Duplicates are dropped, first occurrence wins.
    """
    schemes: List[SchemeId] = []
    for token in (part.strip() for part in text.split(",")):
        if not token:
            continue
        expanded = SCHEME_PRESETS.get(token.lower(), None) or [SchemeId.parse(token)]
        for scheme in expanded:
            if scheme not in schemes:
                schemes.append(scheme)
    return schemes


class SweepAxis(str, Enum):
    LAMBDA_GT = "lambda_gt"
    P_G_MAX_DBM = "p_g_max_dbm"


class SweepSpec(BaseModel):
    axis: SweepAxis
    values: List[float]
    schemes: List[SchemeId]
    instances_per_point: int = Field(500, ge=1)
    base_seed: int = 0

    @field_validator("values")
    @classmethod
    def values_strictly_increasing(cls, values: List[float]) -> List[float]:
        if not values:
            raise ValueError("Sweep values must not be empty")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("Sweep values must be strictly increasing")
        return values

    @field_validator("schemes")
    @classmethod
    def schemes_not_empty(cls, schemes: List[SchemeId]) -> List[SchemeId]:
        if not schemes:
            raise ValueError("At least one scheme is required")
        return schemes
