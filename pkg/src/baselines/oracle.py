import itertools
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from allocation.power import interference_budget
from channel.gains import GainTable
from metrics.link import UNASSIGNED, channel_sum_rate
from network.scenario import CellScenario
from schemas.reports import OracleResult
from schemas.simulation import SimConfig

logger = logging.getLogger(__name__)

MAX_ORACLE_MGS = 4
MAX_ORACLE_CUS = 3
MAX_GRID_LEVELS = 8
BUDGET_SLACK = 1e-9

Option = Optional[Tuple[int, float]]


class OracleGuardError(ValueError):
    pass


def default_power_grid(config: SimConfig, levels: int) -> np.ndarray:
    """``levels`` evenly spaced powers from 0 to P_g^max (mW)."""
    return np.linspace(0.0, config.p_g_max_mw, levels)


def _check_guard(gains: GainTable, config: SimConfig, grid: np.ndarray) -> None:
    if gains.n_mg > MAX_ORACLE_MGS or gains.n_cu > MAX_ORACLE_CUS:
        raise OracleGuardError(
            f"Instance has {gains.n_mg} MG(s) and {gains.n_cu} CU(s); "
            f"exhaustive search accepts at most {MAX_ORACLE_MGS} and {MAX_ORACLE_CUS}."
        )
    if not 1 <= grid.size <= MAX_GRID_LEVELS:
        raise OracleGuardError(f"Power grid needs 1 to {MAX_GRID_LEVELS} levels, got {grid.size}.")
    if grid.min() < 0 or grid.max() > config.p_g_max_mw * (1 + BUDGET_SLACK):
        raise OracleGuardError("Power grid levels must lie in [0, P_g^max].")


def round_down_to_grid(powers: Sequence[float], grid: Sequence[float]) -> np.ndarray:
    """Largest grid level not above each power; the grid must contain 0."""
    levels = np.sort(np.asarray(grid, dtype=float))
    if levels.size == 0 or levels[0] != 0.0:
        raise ValueError("Power grid must contain 0 to round down onto it.")
    idx = np.searchsorted(levels, np.asarray(powers, dtype=float), side="right") - 1
    return levels[np.clip(idx, 0, None)]


class _ChannelScorer:
    """Memoized per-channel sum-rate; member order is ascending MG index on every path."""

    def __init__(self, gains: GainTable, config: SimConfig) -> None:
        self._gains = gains
        self._config = config
        self._cache: Dict[Tuple[int, Tuple[Tuple[int, float], ...]], float] = {}

    def rate(self, k: int, members: Tuple[Tuple[int, float], ...]) -> float:
        key = (k, members)
        if key not in self._cache:
            mgs = [g for g, _ in members]
            powers = [p for _, p in members]
            self._cache[key] = channel_sum_rate(k, mgs, powers, self._gains, self._config)
        return self._cache[key]

    def total(self, channels: Sequence[int], powers: Sequence[float]) -> float:
        per_channel: List[List[Tuple[int, float]]] = [[] for _ in range(self._gains.n_cu)]
        for g, (k, p) in enumerate(zip(channels, powers)):
            if k != UNASSIGNED:
                per_channel[k].append((g, float(p)))
        return math.fsum(self.rate(k, tuple(members)) for k, members in enumerate(per_channel))


def score_allocation(
        gains: GainTable,
        config: SimConfig,
        channels: Sequence[int],
        powers: Sequence[float]
) -> float:
    """Objective of an allocation on the exhaustive search's own evaluation path."""
    return _ChannelScorer(gains, config).total(channels, powers)


def brute_force_optimum(
        scenario: CellScenario,
        gains: GainTable,
        config: SimConfig,
        power_grid: Sequence[float],
        strict_c3: bool = False
) -> OracleResult:
    """
    Exhaustive search over every channel assignment and grid power.

    Each MG either stays out (unless ``strict_c3``) or takes one channel at one grid level.
    Candidates breaking an interference budget are skipped. Among the best objectives the
    first one in enumeration order wins.

    :raises OracleGuardError: if the instance or the grid is too large.
    """
    grid = np.asarray(power_grid, dtype=float)
    _check_guard(gains, config, grid)

    budgets = [interference_budget(k, gains, config) * (1 + BUDGET_SLACK) for k in range(gains.n_cu)]
    options: List[Option] = [] if strict_c3 else [None]
    options += [(k, float(p)) for k in range(gains.n_cu) for p in grid]
    logger.info("Exhaustive search over %d candidate allocation(s)", len(options) ** gains.n_mg)

    scorer = _ChannelScorer(gains, config)
    best: Optional[Tuple[Option, ...]] = None
    best_score = -math.inf
    evaluated = 0
    for combo in itertools.product(options, repeat=gains.n_mg):
        load = [0.0] * gains.n_cu
        for g, choice in enumerate(combo):
            if choice is not None:
                load[choice[0]] += choice[1] * float(gains.h_gb[g, choice[0]])
        if any(used > budget for used, budget in zip(load, budgets)):
            continue
        evaluated += 1
        channels = [UNASSIGNED if c is None else c[0] for c in combo]
        powers = [0.0 if c is None else c[1] for c in combo]
        score = scorer.total(channels, powers)
        if score > best_score:
            best, best_score = combo, score

    if best is None:
        raise OracleGuardError("No allocation on the power grid satisfies the interference budgets.")

    return OracleResult(
        assignment=[None if c is None else c[0] for c in best],
        powers_mw=[0.0 if c is None else c[1] for c in best],
        objective_bps=best_score,
        evaluated=evaluated,
    )
