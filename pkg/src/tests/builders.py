"""Hand-made configs, scenarios and gain tables for small deterministic tests."""
from typing import Optional, Sequence

import numpy as np

from channel.gains import GainTable
from network.scenario import CellScenario, generate_scenario
from schemas.simulation import SimConfig

UNIT_DENSITIES = dict(lambda_cu=1.2732395e-05, lambda_gt=1.2732395e-05, lambda_gr=3.8197186e-04)


def unit_config(**overrides) -> SimConfig:
    """
    Config with 1 mW CU power, 1 mW noise, 1 Hz bandwidth and 0 dB thresholds so rates can
    be checked by hand. MG power cap is 1 mW unless overridden. The channel loop starts
    from a threshold far below unit-scale gains and stops at the first coloring that meets
    its target, so iteration traces stay short.
    """
    values = dict(
        UNIT_DENSITIES,
        p_c_max_dbm=0.0,
        p_g_max_dbm=0.0,
        noise_dbm=0.0,
        bandwidth_hz=1.0,
        gamma_c_th_db=0.0,
        gamma_g_th_db=0.0,
        gamma_th_init=1e-9,
        delta=5e-11,
        refine_colorings=0,
    )
    values.update(overrides)
    return SimConfig(**values)


def placeholder_scenario(n_cu: int, group_sizes: Sequence[int], seed: int = 0) -> CellScenario:
    """Positions are irrelevant once gains are given; only the counts matter."""
    return CellScenario(
        cu_positions=np.zeros((n_cu, 2)),
        mgtx_positions=np.zeros((len(group_sizes), 2)),
        mgrx_positions=tuple(np.zeros((size, 2)) for size in group_sizes),
        seed=seed,
    )


def constant_gains(
        n_cu: int,
        n_mg: int,
        receivers: int = 1,
        cb: float = 1.0,
        gb: float = 1e-12,
        serving: float = 1.0,
        cross: float = 1e-12,
        cu_rx: float = 1e-12,
        h_gb: Optional[np.ndarray] = None,
        h_cb: Optional[Sequence[float]] = None
) -> GainTable:
    """
    Gain table with the same value on every link of a kind; ``h_gb``/``h_cb`` override the
    BS-side gains with explicit arrays.
    """
    h_cb = np.full(n_cu, cb) if h_cb is None else np.asarray(h_cb, dtype=float)
    h_gb = np.full((n_mg, n_cu), gb) if h_gb is None else np.asarray(h_gb, dtype=float)
    h_gr, h_cr = [], []
    for g in range(n_mg):
        gr = np.full((n_mg, receivers, n_cu), cross)
        gr[g] = serving
        h_gr.append(gr)
        h_cr.append(np.full((n_cu, receivers), cu_rx))
    return GainTable.from_channel_gains(h_cb, h_gb, h_gr, h_cr)


def random_gains(
        rng: np.random.Generator,
        n_cu: int,
        group_sizes: Sequence[int],
        serving: tuple = (0.5, 2.0),
        cross: tuple = (0.0, 0.3),
        to_bs: tuple = (0.05, 0.5)
) -> GainTable:
    """Uniform random gains on the scale of ``unit_config``; serving links dominate cross links."""
    n_mg = len(group_sizes)
    h_gr, h_cr = [], []
    for g, size in enumerate(group_sizes):
        gr = rng.uniform(*cross, (n_mg, size, n_cu))
        gr[g] = rng.uniform(*serving, (size, n_cu))
        h_gr.append(gr)
        h_cr.append(rng.uniform(*cross, (n_cu, size)))
    return GainTable.from_channel_gains(
        rng.uniform(1.0, 4.0, n_cu),
        rng.uniform(*to_bs, (n_mg, n_cu)),
        h_gr,
        h_cr,
    )


def first_live_seed(config: SimConfig, start: int = 0) -> int:
    """Smallest seed from ``start`` whose scenario has at least one CU and one MG."""
    seed = start
    while generate_scenario(config, seed).is_degenerate:
        seed += 1
    return seed
