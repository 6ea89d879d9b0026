import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from allocation.channels import ChannelAssignment, allocate_channels
from allocation.power import PowerState, allocate_all_powers
from baselines.channels import greedy_ia_channels, rca_channels
from baselines.power import epa_power, mpa_power, wfpa_power
from channel.gains import GainTable, build_gain_table
from metrics.link import UNASSIGNED, full_cu_power, objective_and_constraints
from network.scenario import CellScenario, generate_scenario
from schemas.reports import RateReport
from schemas.simulation import BUDGET_COMPLIANT_POWER, ChannelScheme, PowerScheme, SchemeId, SimConfig

logger = logging.getLogger(__name__)

CHANNEL_STREAM = {scheme: idx for idx, scheme in enumerate(ChannelScheme)}
POWER_STREAM = {scheme: idx for idx, scheme in enumerate(PowerScheme)}


class DegenerateScenarioError(ValueError):
    def __init__(self, seed: int) -> None:
        super().__init__("Scenario has no CUs or no MGs.")
        self.seed = seed


def gains_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng([seed, 1])


def channel_rng(seed: int, scheme: ChannelScheme) -> np.random.Generator:
    return np.random.default_rng([seed, 2, CHANNEL_STREAM[scheme]])


def power_rng(seed: int, channel: ChannelScheme, power: PowerScheme) -> np.random.Generator:
    return np.random.default_rng([seed, 3, CHANNEL_STREAM[channel], POWER_STREAM[power]])


@dataclass(frozen=True)
class SchemeOutcome:
    scheme: SchemeId
    assignment: ChannelAssignment
    p_g: np.ndarray
    report: RateReport
    power_states: List[PowerState] = field(default_factory=list)

    @property
    def power_iters(self) -> int:
        return max((state.iteration for state in self.power_states), default=0)

    @property
    def excluded_fraction(self) -> float:
        channels = self.assignment.channels
        return float(np.mean(channels == UNASSIGNED)) if channels.size else 0.0

    @property
    def violated(self) -> bool:
        """MG-side breaches only for budget-compliant power schemes, any breach otherwise."""
        if self.scheme.power_scheme in BUDGET_COMPLIANT_POWER:
            return self.report.has_mg_violation
        return self.report.has_mg_violation or self.report.has_cu_violation


@dataclass(frozen=True)
class InstanceSummary:
    """Scalar results of one scheme on one instance; cheap to ship between processes."""
    objective: float
    cu_rate: float
    mg_rate: float
    violated: bool
    outer_iters: int
    color_rounds: int
    power_iters: int
    excluded_fraction: float

    @classmethod
    def from_outcome(cls, outcome: SchemeOutcome) -> "InstanceSummary":
        return cls(
            objective=outcome.report.objective,
            cu_rate=float(sum(outcome.report.cu_rate)),
            mg_rate=float(sum(outcome.report.mg_rate)),
            violated=outcome.violated,
            outer_iters=outcome.assignment.outer_iters,
            color_rounds=outcome.assignment.color_rounds,
            power_iters=outcome.power_iters,
            excluded_fraction=outcome.excluded_fraction,
        )


def run_channel_scheme(
        scheme: ChannelScheme,
        scenario: CellScenario,
        gains: GainTable,
        config: SimConfig,
        seed: int
) -> ChannelAssignment:
    if scheme is ChannelScheme.PROPOSED:
        return allocate_channels(scenario, gains, config, channel_rng(seed, scheme))
    if scheme is ChannelScheme.RCA:
        return rca_channels(scenario, gains, config, channel_rng(seed, scheme))
    return greedy_ia_channels(scenario, gains, config)


def run_power_scheme(
        scheme: SchemeId,
        assignment: ChannelAssignment,
        gains: GainTable,
        config: SimConfig,
        seed: int
) -> tuple[np.ndarray, List[PowerState]]:
    channels = assignment.channels
    if scheme.power_scheme is PowerScheme.PROPOSED:
        return allocate_all_powers(channels, gains, config, power_rng(seed, scheme.channel_scheme, scheme.power_scheme))

    p_g = np.zeros(gains.n_mg)
    for k in range(gains.n_cu):
        mgs = np.flatnonzero(channels == k)
        if not mgs.size:
            continue
        if scheme.power_scheme is PowerScheme.EPA:
            p_g[mgs] = epa_power(k, mgs, gains, config)
        elif scheme.power_scheme is PowerScheme.MPA:
            p_g[mgs] = mpa_power(k, mgs, config)
        else:
            p_g[mgs] = wfpa_power(k, mgs, gains, config)
    return p_g, []


def evaluate_schemes(
        scenario: CellScenario,
        gains: GainTable,
        config: SimConfig,
        schemes: Sequence[SchemeId],
        seed: int
) -> List[SchemeOutcome]:
    """
    Run every scheme on one scenario and gain table. A channel scheme runs once and its
    assignment is shared by all power schemes paired with it.
    """
    assignments: Dict[ChannelScheme, ChannelAssignment] = {}
    p_c = full_cu_power(config, gains.n_cu)
    outcomes = []
    for scheme in schemes:
        if scheme.channel_scheme not in assignments:
            assignments[scheme.channel_scheme] = run_channel_scheme(scheme.channel_scheme, scenario, gains, config, seed)
        assignment = assignments[scheme.channel_scheme]
        p_g, states = run_power_scheme(scheme, assignment, gains, config, seed)
        report = objective_and_constraints(scenario, gains, assignment.to_allocation(p_g, p_c), config)
        outcomes.append(SchemeOutcome(scheme=scheme, assignment=assignment, p_g=p_g, report=report, power_states=states))
    return outcomes


def build_instance(config: SimConfig, seed: int) -> tuple[CellScenario, GainTable]:
    """
    :raises DegenerateScenarioError: if the cell has no CU or no MG.
    """
    scenario = generate_scenario(config, seed)
    if scenario.is_degenerate:
        raise DegenerateScenarioError(seed)
    return scenario, build_gain_table(scenario, config, gains_rng(seed))


def evaluate_seed(config: SimConfig, seed: int, schemes: Sequence[SchemeId]) -> Optional[List[InstanceSummary]]:
    """Summaries per scheme for one seeded instance, or ``None`` when the instance is skipped."""
    try:
        scenario, gains = build_instance(config, seed)
    except DegenerateScenarioError:
        return None
    return [InstanceSummary.from_outcome(o) for o in evaluate_schemes(scenario, gains, config, schemes, seed)]
