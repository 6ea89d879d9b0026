import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from allocation.candidates import CandidateChannelSets, candidate_sets
from allocation.coloring import ColoringState, distributed_coloring
from allocation.graph import build_interference_graph
from channel.gains import GainTable
from metrics.link import UNASSIGNED, Allocation, channel_sum_rate
from network.scenario import CellScenario
from schemas.reports import OuterIterationRecord
from schemas.simulation import SimConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChannelAssignment:
    """Channel part of an allocation with the run statistics behind it."""
    channels: np.ndarray
    candidates: CandidateChannelSets
    trace: List[OuterIterationRecord] = field(default_factory=list)
    outer_iters: int = 0
    color_rounds: int = 0
    gamma_th: Optional[float] = None

    @property
    def excluded(self) -> np.ndarray:
        return np.flatnonzero(self.channels == UNASSIGNED)

    def members(self, k: int) -> np.ndarray:
        return np.flatnonzero(self.channels == k)

    def to_allocation(self, p_g: Sequence[float], p_c: Sequence[float]) -> Allocation:
        return Allocation.from_channels(self.channels.tolist(), p_g, p_c)


def probe_objective(channels: np.ndarray, gains: GainTable, config: SimConfig) -> float:
    """Sum-throughput of a channel assignment with every assigned MG at P_g^max."""
    rates = []
    for k in range(gains.n_cu):
        members = np.flatnonzero(channels == k)
        rates.append(channel_sum_rate(k, members, np.full(members.size, config.p_g_max_mw), gains, config))
    return math.fsum(rates)


def coloring_target(candidates: CandidateChannelSets, n_cu: int) -> int:
    return min(n_cu, len(candidates.channels_in_use), len(candidates.active))


def _as_channels(coloring: ColoringState) -> np.ndarray:
    return np.array([UNASSIGNED if c is None else c for c in coloring.colors], dtype=int)


def allocate_channels(
        scenario: CellScenario,
        gains: GainTable,
        config: SimConfig,
        rng: np.random.Generator
) -> ChannelAssignment:
    """
    Adaptive-threshold channel allocation.

    Colors the interference graph, lowering ``gamma_th`` by ``delta`` after a failed
    coloring and raising it after a feasible one that uses fewer distinct channels than the
    target. Once a coloring reaches the target, the same graph is recolored up to
    ``refine_colorings`` more times with fresh coins. The best feasible coloring seen,
    scored at full MG power, is returned. If no feasible coloring turned up before the last
    allowed iteration, that iteration runs at ``gamma_th = 0`` where only disjoint candidate
    sets are joined. Every coloring, refinements included, counts against
    ``max_outer_iters``.

    :param rng: Drives every node's color choices; one child stream per outer iteration.
    :return: The chosen channels (``UNASSIGNED`` for excluded MGs) and the iteration trace.
    """
    candidates = candidate_sets(scenario, gains, config)
    target = coloring_target(candidates, gains.n_cu)
    greedy = config.color_choice == "greedy"

    gamma_th = config.gamma_th_init
    trace: List[OuterIterationRecord] = []
    best: Optional[np.ndarray] = None
    best_score = -math.inf
    best_gamma: Optional[float] = None
    rounds_total = 0
    refinements = 0

    for iteration in range(1, config.max_outer_iters + 1):
        if best is None and iteration == config.max_outer_iters:
            gamma_th = 0.0
        graph = build_interference_graph(candidates, gains, gamma_th)
        coloring = distributed_coloring(graph, candidates, rng.spawn(1)[0], config.max_color_rounds, greedy)
        rounds_total += coloring.round
        trace.append(
            OuterIterationRecord(
                iter=iteration,
                gamma_th=gamma_th,
                flag=coloring.flag,
                colors_unique=coloring.colors_unique,
                edges=graph.edges,
                rounds=coloring.round,
            )
        )

        if not coloring.flag:
            channels = _as_channels(coloring)
            score = probe_objective(channels, gains, config)
            if score > best_score:
                best, best_score, best_gamma = channels, score, gamma_th
            if coloring.colors_unique >= target:
                if refinements == config.refine_colorings:
                    break
                refinements += 1
                continue
            gamma_th += config.delta
        else:
            gamma_th = max(0.0, gamma_th - config.delta)
        logger.debug("Outer iteration %d: flag=%d, next gamma_th=%.3e", iteration, coloring.flag, gamma_th)

    if best is None:
        logger.warning("No feasible coloring in %d outer iteration(s); all MGs excluded", len(trace))
        best = np.full(gains.n_mg, UNASSIGNED, dtype=int)

    return ChannelAssignment(
        channels=best,
        candidates=candidates,
        trace=trace,
        outer_iters=len(trace),
        color_rounds=rounds_total,
        gamma_th=best_gamma,
    )
