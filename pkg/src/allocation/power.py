import logging
from dataclasses import dataclass, field, replace
from typing import List, Sequence, Tuple

import numpy as np

from allocation.rounds import Inbox, SynchronousNetwork
from channel.gains import GainTable
from network.units import dbm_to_linear
from schemas.reports import PowerTraceRecord
from schemas.simulation import SimConfig

logger = logging.getLogger(__name__)

WINDOW_TOLERANCE_DB = 1e-9


def interference_budget(k: int, gains: GainTable, config: SimConfig) -> float:
    """
    Largest aggregate MG interference at the BS on channel ``k`` that keeps the CU at its
    SINR threshold (mW).
    """
    received = config.p_c_max_mw * float(gains.h_cb[k])
    return max(0.0, received / config.gamma_c_th - config.noise_mw)


@dataclass(frozen=True)
class PowerState:
    mgs: Tuple[int, ...]
    bs_gains: np.ndarray
    powers: np.ndarray
    budget: float
    p_min_dbm: float
    p_max_dbm: float
    iteration: int = 0
    exchanges: int = 0
    trace: List[PowerTraceRecord] = field(default_factory=list)

    @property
    def unassigned(self) -> np.ndarray:
        return np.isnan(self.powers)

    @property
    def aggregate(self) -> float:
        """Interference of the assigned MGs at the BS (mW)."""
        return float(np.nansum(self.powers * self.bs_gains))

    def record(self) -> "PowerState":
        entry = PowerTraceRecord(
            iter=self.iteration,
            p_min_dbm=self.p_min_dbm,
            p_max_dbm=self.p_max_dbm,
            unassigned_count=int(self.unassigned.sum()),
            aggregate_interference_mw=self.aggregate,
        )
        return replace(self, trace=[*self.trace, entry])


@dataclass(frozen=True)
class _Tokens:
    gain_key: Tuple[float, int]
    power: float


class _TranspositionProgram:
    """Odd-even transposition: in phase ``t`` position ``i`` compares with ``i + 1`` when ``i + t`` is even."""

    def __init__(self) -> None:
        self.step = 0
        self.exchanges = 0

    @staticmethod
    def announce(node: int, state: _Tokens, inbox: Inbox):
        return state, state

    def compare(self, node: int, state: _Tokens, inbox: Inbox):
        partner = node + 1 if (node + self.step) % 2 == 0 else node - 1
        other = next((msg.payload for msg in inbox if msg.sender == partner), None)
        if other is None:
            return state, state
        pick = min if node < partner else max
        updated = _Tokens(gain_key=pick(state.gain_key, other.gain_key), power=pick(state.power, other.power))
        if node < partner and updated != state:
            self.exchanges += 1
        return updated, updated


def resolve_conflicts(
        mgs: Sequence[int],
        bs_gains: Sequence[float],
        state: PowerState,
        rng: np.random.Generator
) -> PowerState:
    """
    Permute the drawn powers among co-channel MGs so that a larger gain towards the BS
    never holds a larger power.

    The MGs sit on a randomly ordered peer line and run odd-even transposition on two token
    streams at once: gain tokens sort by descending gain and power tokens by ascending
    power. After ``len(mgs)`` phases the MG whose gain token rests at position ``i``
    takes the power token at position ``i``.
    """
    n = len(mgs)
    if n < 2:
        return state
    order = rng.permutation(n)
    gains_arr = np.asarray(bs_gains, dtype=float)
    tokens = [_Tokens(gain_key=(-float(gains_arr[i]), i), power=float(state.powers[i])) for i in order]

    network: SynchronousNetwork[_Tokens, _Tokens] = SynchronousNetwork(
        [[p for p in (i - 1, i + 1) if 0 <= p < n] for i in range(n)]
    )
    program = _TranspositionProgram()
    tokens, inboxes = network.phase(tokens, network.empty_inboxes(), program.announce)
    for step in range(n):
        program.step = step
        tokens, inboxes = network.phase(tokens, inboxes, program.compare)

    powers = np.empty(n)
    for token in tokens:
        powers[token.gain_key[1]] = token.power
    return replace(state, powers=powers, exchanges=state.exchanges + program.exchanges)


def window_bounds(config: SimConfig, slides: int) -> Tuple[float, float]:
    """``(p_min, p_max)`` in dBm after the window slid down ``slides`` times."""
    p_max = config.p_g_max_dbm - slides * config.beta_dbm_step
    return p_max - config.beta_dbm_step, p_max


def _draw_window(
        count: int,
        low_dbm: float,
        high_dbm: float,
        rng: np.random.Generator
) -> np.ndarray:
    return dbm_to_linear(rng.uniform(low_dbm, high_dbm, count))


def allocate_power(
        k: int,
        mgs: Sequence[int],
        gains: GainTable,
        config: SimConfig,
        rng: np.random.Generator
) -> PowerState:
    """
    Sliding-window power assignment for the MGs sharing channel ``k``.

    Unassigned MGs draw powers uniformly in dBm inside ``[p_min, p_max]``; conflicts are
    resolved; if the aggregate interference still exceeds the CU budget, every MG above
    ``budget / |G_k|`` is unassigned and the window slides down by ``beta_dbm_step``.
    Once the window top drops to ``P_g^max - power_dynamic_range_db`` the remaining
    unassigned MGs transmit at zero.

    :return: Final powers (mW, aligned with ``mgs``) and the per-iteration trace.
    """
    mgs = tuple(int(g) for g in mgs)
    bs_gains = np.asarray(gains.h_gb[list(mgs), k], dtype=float) if mgs else np.zeros(0)
    floor = config.p_g_max_dbm - config.power_dynamic_range_db
    p_min, p_max = window_bounds(config, 0)
    state = PowerState(
        mgs=mgs,
        bs_gains=bs_gains,
        powers=np.full(len(mgs), np.nan),
        budget=interference_budget(k, gains, config),
        p_min_dbm=p_min,
        p_max_dbm=p_max,
    )
    if not mgs:
        return state

    for iteration in range(1, config.max_power_iters + 1):
        # top is P_g^max - (iteration - 1) * beta
        p_min, p_max = window_bounds(config, iteration - 1)
        state = replace(state, iteration=iteration, p_min_dbm=p_min, p_max_dbm=p_max)
        powers = state.powers.copy()
        collapsed = p_max <= floor + WINDOW_TOLERANCE_DB
        if collapsed:
            powers[state.unassigned] = 0.0
            logger.debug("Channel %d: power window collapsed, %d MG(s) silenced", k, int(state.unassigned.sum()))
        else:
            powers[state.unassigned] = _draw_window(int(state.unassigned.sum()), max(p_min, floor), p_max, rng)
        state = resolve_conflicts(mgs, bs_gains, replace(state, powers=powers), rng).record()

        if collapsed or state.aggregate <= state.budget:
            break

        share = state.budget / len(mgs)
        powers = state.powers.copy()
        powers[powers * bs_gains > share] = np.nan
        state = replace(state, powers=powers)
    else:
        powers = np.nan_to_num(state.powers, nan=0.0)
        state = replace(state, powers=powers)
        logger.warning("Channel %d: power loop hit max_power_iters=%d", k, config.max_power_iters)

    return state


def allocate_all_powers(
        channels: np.ndarray,
        gains: GainTable,
        config: SimConfig,
        rng: np.random.Generator
) -> Tuple[np.ndarray, List[PowerState]]:
    """Run the power loop on every channel; excluded MGs keep zero power."""
    p_g = np.zeros(gains.n_mg)
    states = []
    for k in range(gains.n_cu):
        mgs = np.flatnonzero(channels == k)
        state = allocate_power(k, mgs, gains, config, rng)
        if mgs.size:
            p_g[mgs] = state.powers
        states.append(state)
    return p_g, states
