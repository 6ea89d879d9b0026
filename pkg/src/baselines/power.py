from typing import Sequence, Tuple

import numpy as np

from allocation.power import interference_budget
from channel.gains import GainTable
from schemas.simulation import SimConfig

WATER_LEVEL_TOLERANCE = 1e-9
WATER_LEVEL_MAX_STEPS = 200


def epa_power(k: int, mgs: Sequence[int], gains: GainTable, config: SimConfig) -> np.ndarray:
    """Common power for every MG on ``k``: P_g^max, or the level at which the budget binds."""
    mgs = np.asarray(mgs, dtype=int)
    if not mgs.size:
        return np.zeros(0)
    total_gain = float(gains.h_gb[mgs, k].sum())
    budget = interference_budget(k, gains, config)
    level = config.p_g_max_mw if total_gain == 0 else min(config.p_g_max_mw, budget / total_gain)
    return np.full(mgs.size, level)


def mpa_power(k: int, mgs: Sequence[int], config: SimConfig) -> np.ndarray:
    return np.full(len(mgs), config.p_g_max_mw)


def water_filling_terms(
        k: int,
        mgs: Sequence[int],
        gains: GainTable,
        config: SimConfig
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Per-MG serving gain ``e``, interference-plus-noise ``n`` at the worst receiver on
    channel ``k`` and gain ``h`` towards the BS.

    The worst receiver is the one with the smallest ``e / n``; other MGs are ignored.
    """
    p_c = config.p_c_max_mw
    serving, floor, to_bs = [], [], []
    for g in mgs:
        e_all = gains.h_gr[g][g, :, k]
        n_all = gains.h_cr[g][k] * p_c + config.noise_mw
        worst = int(np.argmin(e_all / n_all))
        serving.append(e_all[worst])
        floor.append(n_all[worst])
        to_bs.append(gains.h_gb[g, k])
    return np.array(serving, dtype=float), np.array(floor, dtype=float), np.array(to_bs, dtype=float)


def _water_powers(level: float, e: np.ndarray, n: np.ndarray, h: np.ndarray, cap: float) -> np.ndarray:
    with np.errstate(divide="ignore"):
        raw = np.where(h > 0, level / h, np.inf) - n / e
    return np.clip(raw, 0.0, cap)


def wfpa_power(k: int, mgs: Sequence[int], gains: GainTable, config: SimConfig) -> np.ndarray:
    """
    Water-filling over the MGs of channel ``k``.

    Maximizes ``sum log2(1 + p e / n)`` subject to ``sum p h <= budget`` and
    ``0 <= p <= P_g^max``. The solution has the form ``p = clip(mu / h - n / e, 0, P_g^max)``;
    the water level ``mu`` is found by bisection and the budget-feasible side is returned.
    """
    mgs = np.asarray(mgs, dtype=int)
    cap = config.p_g_max_mw
    if not mgs.size:
        return np.zeros(0)
    budget = interference_budget(k, gains, config)
    e, n, h = water_filling_terms(k, mgs, gains, config)

    if cap * float(h.sum()) <= budget:
        return np.full(mgs.size, cap)
    if budget <= 0:
        return np.zeros(mgs.size)

    low, high = 0.0, float(np.max(h * (cap + n / e)))
    for _ in range(WATER_LEVEL_MAX_STEPS):
        level = 0.5 * (low + high)
        used = float(_water_powers(level, e, n, h, cap) @ h)
        if used > budget:
            high = level
        else:
            low = level
            if budget - used <= WATER_LEVEL_TOLERANCE * budget:
                break
    return _water_powers(low, e, n, h, cap)
