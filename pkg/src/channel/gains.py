import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from network.scenario import CellScenario
from schemas.reports import GainTableDump
from schemas.simulation import SimConfig

logger = logging.getLogger(__name__)


class ChannelModelError(ValueError):
    pass


def link_gain(
        tx: Sequence[float],
        rx: Sequence[float],
        shadow_sample: float,
        fading_sample: float,
        config: SimConfig
) -> float:
    """
    Linear gain of one link: distance power law, log-normal shadowing and Rayleigh fading.

    :param shadow_sample: Shadowing realisation in dB.
    :param fading_sample: Small-scale power fading realisation (unit-mean exponential).
    :raises ChannelModelError: if the nodes are co-located or the fading sample is not positive.
    """
    distance = float(np.hypot(tx[0] - rx[0], tx[1] - rx[1]))
    if distance == 0:
        raise ChannelModelError(f"Co-located nodes at {tuple(tx)} have no defined path loss")
    if fading_sample <= 0:
        raise ChannelModelError(f"Fading sample must be positive, got {fading_sample}")
    return distance ** (-config.pathloss_exp) * 10 ** (shadow_sample / 10) * fading_sample


@dataclass(frozen=True)
class GainTable:
    """
    Per-channel linear gains of every link the SINR formulas read.

    Layout (k is the channel index, which is also the index of the CU owning it):
    - ``h_cb[k]``: CU k -> BS on its own channel.
    - ``h_gb[g, k]``: MGTx g -> BS on channel k.
    - ``h_gr[g][j, r, k]``: MGTx j -> receiver r of group g on channel k (j == g is the serving link).
    - ``h_cr[g][k, r]``: CU k -> receiver r of group g on channel k.

    The ``large_*`` arrays hold the same links without small-scale fading; they are channel
    invariant.
    """
    h_cb: np.ndarray
    h_gb: np.ndarray
    h_gr: Tuple[np.ndarray, ...]
    h_cr: Tuple[np.ndarray, ...]
    large_cb: np.ndarray
    large_gb: np.ndarray
    large_gr: Tuple[np.ndarray, ...]
    large_cr: Tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        n_cu = self.h_cb.shape[0]
        n_mg = len(self.h_gr)
        if self.h_gb.shape != (n_mg, n_cu):
            raise ChannelModelError(f"h_gb must be {n_mg}x{n_cu}, got {self.h_gb.shape}")
        if len(self.h_cr) != n_mg:
            raise ChannelModelError("h_cr must hold one array per MG")
        for g, (gr, cr) in enumerate(zip(self.h_gr, self.h_cr)):
            if gr.ndim != 3 or gr.shape[0] != n_mg or gr.shape[2] != n_cu:
                raise ChannelModelError(f"h_gr[{g}] must be {n_mg}x|U_g|x{n_cu}, got {gr.shape}")
            if cr.shape != (n_cu, gr.shape[1]):
                raise ChannelModelError(f"h_cr[{g}] must be {n_cu}x{gr.shape[1]}, got {cr.shape}")
        for array in (self.h_cb, self.h_gb, *self.h_gr, *self.h_cr):
            if not np.all(np.isfinite(array)) or np.any(array < 0):
                raise ChannelModelError("Gains must be finite and nonnegative")

    @property
    def n_cu(self) -> int:
        return int(self.h_cb.shape[0])

    @property
    def n_mg(self) -> int:
        return len(self.h_gr)

    @property
    def group_sizes(self) -> np.ndarray:
        return np.array([gr.shape[1] for gr in self.h_gr], dtype=int)

    def worst_receivers(self) -> np.ndarray:
        """Index of each group's receiver with the weakest large-scale serving gain."""
        return np.array([int(np.argmin(self.large_gr[g][g])) for g in range(self.n_mg)], dtype=int)

    def worst_receiver_cross_gains(self) -> np.ndarray:
        """
        Matrix ``cross[g, j]``: large-scale gain from MGTx g to the worst receiver of group j.
        The diagonal holds the serving gain of each worst receiver.
        """
        worst = self.worst_receivers()
        cross = np.empty((self.n_mg, self.n_mg))
        for j in range(self.n_mg):
            cross[:, j] = self.large_gr[j][:, worst[j]]
        return cross

    def to_dump(self) -> GainTableDump:
        return GainTableDump(
            h_cb=self.h_cb.tolist(),
            h_gb=self.h_gb.tolist(),
            h_gr=[gr.tolist() for gr in self.h_gr],
            h_cr=[cr.tolist() for cr in self.h_cr],
        )

    @classmethod
    def from_channel_gains(
            cls,
            h_cb: Sequence[float],
            h_gb: Sequence[Sequence[float]],
            h_gr: Sequence[np.ndarray],
            h_cr: Sequence[np.ndarray]
    ) -> "GainTable":
        """
        Build a table from explicit per-channel gains, taking the channel average as the
        large-scale component. Meant for hand-crafted instances.
        """
        h_cb = np.asarray(h_cb, dtype=float)
        h_gb = np.asarray(h_gb, dtype=float).reshape(-1, h_cb.shape[0])
        h_gr = tuple(np.asarray(gr, dtype=float) for gr in h_gr)
        h_cr = tuple(np.asarray(cr, dtype=float) for cr in h_cr)
        return cls(
            h_cb=h_cb,
            h_gb=h_gb,
            h_gr=h_gr,
            h_cr=h_cr,
            large_cb=h_cb.copy(),
            large_gb=h_gb.mean(axis=1),
            large_gr=tuple(gr.mean(axis=2) for gr in h_gr),
            large_cr=tuple(cr.copy() for cr in h_cr),
        )


class _LinkSampler:
    def __init__(self, config: SimConfig, rng: np.random.Generator) -> None:
        self._config = config
        self._rng = rng
        self.clamped = 0

    def distances(self, tx: np.ndarray, rx: np.ndarray) -> np.ndarray:
        tx = np.atleast_2d(tx)
        rx = np.atleast_2d(rx)
        d = np.hypot(tx[:, None, 0] - rx[None, :, 0], tx[:, None, 1] - rx[None, :, 1])
        too_close = d < self._config.min_link_distance_m
        self.clamped += int(too_close.sum())
        return np.where(too_close, self._config.min_link_distance_m, d)

    def large_scale(self, distances: np.ndarray) -> np.ndarray:
        shadow_db = self._rng.normal(0.0, self._config.shadow_sigma_db, distances.shape)
        return distances ** (-self._config.pathloss_exp) * np.power(10.0, shadow_db / 10.0)

    def fading(self, shape: Tuple[int, ...]) -> np.ndarray:
        return self._rng.exponential(1.0, shape)


def build_gain_table(scenario: CellScenario, config: SimConfig, rng: np.random.Generator) -> GainTable:
    """
    Draw every link gain of a scenario.

    Shadowing is drawn once per (tx, rx) pair and shared by all channels; fading is drawn
    independently per channel. CUs only transmit on their own channel, so CU links carry a
    single fading draw.

    :raises ValueError: if the scenario has no CU or no MG.
    """
    if scenario.is_degenerate:
        raise ValueError("A gain table needs at least one CU and one MG")
    sampler = _LinkSampler(config, rng)
    n_cu, n_mg = scenario.n_cu, scenario.n_mg
    bs = np.asarray(scenario.bs_position, dtype=float)

    large_cb = sampler.large_scale(sampler.distances(scenario.cu_positions, bs)[:, 0])
    h_cb = large_cb * sampler.fading((n_cu,))

    large_gb = sampler.large_scale(sampler.distances(scenario.mgtx_positions, bs)[:, 0])
    h_gb = large_gb[:, None] * sampler.fading((n_mg, n_cu))

    large_gr, h_gr, large_cr, h_cr = [], [], [], []
    for receivers in scenario.mgrx_positions:
        mg_large = sampler.large_scale(sampler.distances(scenario.mgtx_positions, receivers))
        large_gr.append(mg_large)
        h_gr.append(mg_large[:, :, None] * sampler.fading(mg_large.shape + (n_cu,)))

        cu_large = sampler.large_scale(sampler.distances(scenario.cu_positions, receivers))
        large_cr.append(cu_large)
        h_cr.append(cu_large * sampler.fading(cu_large.shape))

    if sampler.clamped:
        logger.warning(
            "Seed %d: %d link(s) shorter than %.2f m clamped",
            scenario.seed, sampler.clamped, config.min_link_distance_m
        )

    return GainTable(
        h_cb=h_cb,
        h_gb=h_gb,
        h_gr=tuple(h_gr),
        h_cr=tuple(h_cr),
        large_cb=large_cb,
        large_gb=large_gb,
        large_gr=tuple(large_gr),
        large_cr=tuple(large_cr),
    )
