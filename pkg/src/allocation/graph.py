from dataclasses import dataclass
from typing import Tuple

import numpy as np

from allocation.candidates import CandidateChannelSets
from channel.gains import GainTable


@dataclass(frozen=True)
class InterferenceGraph:
    adjacency: np.ndarray
    gamma_th: float

    @property
    def size(self) -> int:
        return int(self.adjacency.shape[0])

    @property
    def neighbors(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(int(j) for j in np.flatnonzero(row)) for row in self.adjacency)

    @property
    def edges(self) -> int:
        return int(self.adjacency.sum() // 2)

    def edge_list(self) -> Tuple[Tuple[int, int], ...]:
        rows, cols = np.nonzero(np.triu(self.adjacency, k=1))
        return tuple(zip(rows.tolist(), cols.tolist()))


def build_interference_graph(
        candidates: CandidateChannelSets,
        gains: GainTable,
        gamma_th: float
) -> InterferenceGraph:
    """
    Connect two MGs when their candidate sets are disjoint, or when the sets intersect and
    the cross gains towards each other's worst receiver differ by less than ``gamma_th``.
    Excluded MGs stay isolated.

    Cross gains use the large-scale component only.
    """
    if gamma_th < 0:
        raise ValueError(f"gamma_th must be nonnegative, got {gamma_th}")
    membership = candidates.membership(gains.n_cu).astype(int)
    intersecting = (membership @ membership.T) > 0
    active = membership.any(axis=1)

    cross = gains.worst_receiver_cross_gains()
    close = np.abs(cross - cross.T) < gamma_th

    adjacency = np.outer(active, active) & (~intersecting | close)
    np.fill_diagonal(adjacency, False)
    return InterferenceGraph(adjacency=adjacency, gamma_th=float(gamma_th))
