from dataclasses import dataclass
from typing import FrozenSet, Tuple

import numpy as np

from channel.gains import GainTable
from metrics.link import delta_rate_table
from network.scenario import CellScenario
from schemas.simulation import SimConfig


@dataclass(frozen=True)
class CandidateChannelSets:
    """Channels each MG may share (positive throughput delta) and the deltas behind them."""
    sets: Tuple[FrozenSet[int], ...]
    deltas: np.ndarray

    @property
    def n_mg(self) -> int:
        return len(self.sets)

    @property
    def excluded(self) -> Tuple[int, ...]:
        return tuple(g for g, channels in enumerate(self.sets) if not channels)

    @property
    def active(self) -> Tuple[int, ...]:
        return tuple(g for g, channels in enumerate(self.sets) if channels)

    @property
    def channels_in_use(self) -> FrozenSet[int]:
        return frozenset().union(*self.sets) if self.sets else frozenset()

    def membership(self, n_cu: int) -> np.ndarray:
        matrix = np.zeros((self.n_mg, n_cu), dtype=bool)
        for g, channels in enumerate(self.sets):
            matrix[g, list(channels)] = True
        return matrix

    @classmethod
    def from_sets(cls, sets, n_cu: int) -> "CandidateChannelSets":
        """Wrap hand-written sets; deltas are 1 inside a set and 0 outside."""
        frozen = tuple(frozenset(s) for s in sets)
        deltas = np.zeros((len(frozen), n_cu))
        for g, channels in enumerate(frozen):
            deltas[g, list(channels)] = 1.0
        return cls(sets=frozen, deltas=deltas)


def candidate_sets(scenario: CellScenario, gains: GainTable, config: SimConfig) -> CandidateChannelSets:
    """
    Screen every (MG, channel) pair with a solo probe at P_g^max; channel k joins C_g when
    the probe raises the sum-throughput. MGs left with an empty set are excluded.
    """
    deltas = delta_rate_table(scenario, gains, config, config.p_g_max_mw)
    sets = tuple(frozenset(int(k) for k in np.flatnonzero(row > 0)) for row in deltas)
    return CandidateChannelSets(sets=sets, deltas=deltas)
