import logging

import numpy as np

from allocation.candidates import CandidateChannelSets, candidate_sets
from allocation.channels import ChannelAssignment
from channel.gains import GainTable
from metrics.link import UNASSIGNED, channel_sum_rate
from network.scenario import CellScenario
from schemas.simulation import SimConfig

logger = logging.getLogger(__name__)


def random_channels(candidates: CandidateChannelSets, rng: np.random.Generator) -> np.ndarray:
    """One uniform pick from ``sorted(C_g)`` per MG, in MG order; excluded MGs stay unassigned."""
    channels = np.full(candidates.n_mg, UNASSIGNED, dtype=int)
    for g, options in enumerate(candidates.sets):
        if options:
            ordered = sorted(options)
            channels[g] = ordered[int(rng.integers(len(ordered)))]
    return channels


def rca_channels(
        scenario: CellScenario,
        gains: GainTable,
        config: SimConfig,
        rng: np.random.Generator
) -> ChannelAssignment:
    candidates = candidate_sets(scenario, gains, config)
    return ChannelAssignment(channels=random_channels(candidates, rng), candidates=candidates)


def greedy_ia_channels(scenario: CellScenario, gains: GainTable, config: SimConfig) -> ChannelAssignment:
    """
    Interference-aware greedy placement.

    MGs are visited by descending best solo throughput delta (lower index first on ties).
    Each one takes the candidate channel where adding it at P_g^max raises that channel's
    sum-rate most, given the MGs already placed there.
    """
    candidates = candidate_sets(scenario, gains, config)
    channels = np.full(gains.n_mg, UNASSIGNED, dtype=int)
    order = sorted(candidates.active, key=lambda g: (-float(candidates.deltas[g].max()), g))
    p_max = config.p_g_max_mw

    for g in order:
        best_k, best_gain = UNASSIGNED, -np.inf
        for k in sorted(candidates.sets[g]):
            placed = np.flatnonzero(channels == k)
            joined = np.sort(np.append(placed, g))
            gain = (
                channel_sum_rate(k, joined, np.full(joined.size, p_max), gains, config)
                - channel_sum_rate(k, placed, np.full(placed.size, p_max), gains, config)
            )
            if gain > best_gain:
                best_k, best_gain = k, gain
        channels[g] = best_k
        logger.debug("Greedy placement: MG %d -> channel %d (gain %.3e bit/s)", g, best_k, best_gain)

    return ChannelAssignment(channels=channels, candidates=candidates)
