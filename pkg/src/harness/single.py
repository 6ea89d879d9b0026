import logging
from typing import Sequence

import numpy as np

from baselines.oracle import brute_force_optimum, default_power_grid, round_down_to_grid, score_allocation
from allocation.power import interference_budget
from channel.gains import build_gain_table
from harness.instance import DegenerateScenarioError, build_instance, evaluate_schemes, gains_rng
from network.scenario import generate_scenario
from schemas.reports import OracleGapReport, OracleGapRow, SchemeRunReport, SingleRunReport
from schemas.simulation import SchemeId, SimConfig

logger = logging.getLogger(__name__)


def run_single(config: SimConfig, seed: int, schemes: Sequence[SchemeId]) -> SingleRunReport:
    """
    Evaluate one seeded instance under every scheme, keeping the full traces.

    :raises DegenerateScenarioError: if the cell has no CU or no MG.
    """
    scenario, gains = build_instance(config, seed)
    outcomes = evaluate_schemes(scenario, gains, config, schemes, seed)
    return SingleRunReport(
        seed=seed,
        scenario=scenario.to_dump(),
        gains=gains.to_dump(),
        schemes=[
            SchemeRunReport(
                scheme=outcome.scheme.label,
                channels=outcome.assignment.channels.tolist(),
                powers_mw=outcome.p_g.tolist(),
                report=outcome.report,
                channel_trace=outcome.assignment.trace,
                power_traces=[state.trace for state in outcome.power_states],
            )
            for outcome in outcomes
        ],
    )


def _within_budgets(channels: np.ndarray, powers: np.ndarray, gains, config: SimConfig) -> bool:
    for k in range(gains.n_cu):
        mgs = np.flatnonzero(channels == k)
        load = float(powers[mgs] @ gains.h_gb[mgs, k]) if mgs.size else 0.0
        if load > interference_budget(k, gains, config) * (1 + 1e-9):
            return False
    return True


def run_oracle(
        config: SimConfig,
        seed: int,
        schemes: Sequence[SchemeId],
        max_cus: int = 2,
        max_mgs: int = 2,
        grid_levels: int = 6
) -> OracleGapReport:
    """
    Compare every scheme against the exhaustive optimum on a small instance.

    The seeded scenario is cut down to its first ``max_cus`` CUs and ``max_mgs`` MGs. Scheme
    powers are rounded down onto the oracle's grid and scored on the oracle's own path.

    :raises DegenerateScenarioError: if the cut-down cell has no CU or no MG.
    :raises OracleGuardError: if the instance or grid exceeds the exhaustive-search guard.
    """
    scenario = generate_scenario(config, seed)
    small = scenario.subset(min(scenario.n_cu, max_cus), min(scenario.n_mg, max_mgs))
    if small.is_degenerate:
        raise DegenerateScenarioError(seed)
    gains = build_gain_table(small, config, gains_rng(seed))
    grid = default_power_grid(config, grid_levels)

    optimum = brute_force_optimum(small, gains, config, grid)
    rows = []
    for outcome in evaluate_schemes(small, gains, config, schemes, seed):
        powers = round_down_to_grid(outcome.p_g, grid)
        channels = outcome.assignment.channels
        objective = score_allocation(gains, config, channels.tolist(), powers.tolist())
        rows.append(
            OracleGapRow(
                scheme=outcome.scheme.label,
                objective_bps=objective,
                ratio=objective / optimum.objective_bps,
                budget_feasible=_within_budgets(channels, powers, gains, config),
            )
        )
    logger.info("Oracle gap for seed %d over %d scheme(s)", seed, len(rows))
    return OracleGapReport(
        seed=seed,
        n_cu=small.n_cu,
        n_mg=small.n_mg,
        power_grid_mw=grid.tolist(),
        optimum=optimum,
        rows=rows,
    )
