import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from channel.gains import GainTable
from network.scenario import CellScenario
from schemas.reports import DeltaRateRecord, RateReport, ViolationRecord
from schemas.simulation import SimConfig

POWER_TOLERANCE = 1e-12

UNASSIGNED = -1


class AllocationError(ValueError):
    pass


@dataclass(frozen=True)
class Allocation:
    """
    Decision variables of one instance: ``a[g, k]`` channel indicators, MG powers ``p_g``
    and CU powers ``p_c`` (mW).
    """
    a: np.ndarray
    p_g: np.ndarray
    p_c: np.ndarray

    @classmethod
    def from_channels(
            cls,
            channels: Sequence[int],
            p_g: Sequence[float],
            p_c: Sequence[float]
    ) -> "Allocation":
        p_c = np.asarray(p_c, dtype=float)
        a = np.zeros((len(channels), p_c.shape[0]), dtype=int)
        for g, k in enumerate(channels):
            if k != UNASSIGNED:
                a[g, k] = 1
        return cls(a=a, p_g=np.asarray(p_g, dtype=float), p_c=p_c)

    @property
    def channels(self) -> np.ndarray:
        """First assigned channel per MG, ``UNASSIGNED`` for excluded MGs."""
        return np.where(self.a.sum(axis=1) > 0, self.a.argmax(axis=1), UNASSIGNED)

    def members(self, k: int) -> np.ndarray:
        return np.flatnonzero(self.a[:, k])

    def with_mg_powers(self, p_g: Sequence[float]) -> "Allocation":
        return Allocation(a=self.a, p_g=np.asarray(p_g, dtype=float), p_c=self.p_c)


def full_cu_power(config: SimConfig, n_cu: int) -> np.ndarray:
    """CUs always transmit at P_c^max; only MG channels and powers are decided."""
    return np.full(n_cu, config.p_c_max_mw)


def power_bound_violations(alloc: Allocation, config: SimConfig) -> List[ViolationRecord]:
    records = []
    for limit, powers in ((config.p_g_max_mw, alloc.p_g), (config.p_c_max_mw, alloc.p_c)):
        for index, power in enumerate(powers):
            if power < 0 or power > limit * (1 + POWER_TOLERANCE):
                records.append(ViolationRecord(kind="c1_power", index=index, value=float(power), threshold=limit))
    return records


def channel_sinrs(
        k: int,
        members: Sequence[int],
        powers: Sequence[float],
        gains: GainTable,
        p_c: float,
        noise: float
) -> Tuple[float, List[np.ndarray]]:
    """
    SINRs of one orthogonal channel: the CU at the BS and every receiver of each
    co-channel MG. Only MGs on channel ``k`` interfere with each other.

    :param members: MGs sharing channel ``k``.
    :param powers: Their transmit powers (mW), aligned with ``members``.
    :return: The CU SINR and one receiver-SINR array per member.
    """
    members = np.asarray(members, dtype=int)
    powers = np.asarray(powers, dtype=float)
    interference_bs = float(np.dot(gains.h_gb[members, k], powers)) if members.size else 0.0
    cu_sinr = p_c * gains.h_cb[k] / (interference_bs + noise)

    receiver_sinrs = []
    for idx, g in enumerate(members):
        gr = gains.h_gr[g][:, :, k]
        others = np.delete(members, idx)
        mg_interference = np.delete(powers, idx) @ gr[others] if others.size else 0.0
        denominator = mg_interference + gains.h_cr[g][k] * p_c + noise
        receiver_sinrs.append(powers[idx] * gr[g] / denominator)
    return cu_sinr, receiver_sinrs


def _sinrs(gains: GainTable, alloc: Allocation, config: SimConfig) -> Tuple[np.ndarray, List[np.ndarray]]:
    noise = config.noise_mw
    cu_sinr = np.empty(gains.n_cu)
    mg_sinr = [np.zeros((gains.n_cu, size)) for size in gains.group_sizes]
    for k in range(gains.n_cu):
        members = alloc.members(k)
        cu_sinr[k], receiver_sinrs = channel_sinrs(k, members, alloc.p_g[members], gains, alloc.p_c[k], noise)
        for g, sinr in zip(members, receiver_sinrs):
            mg_sinr[g][k] = sinr
    return cu_sinr, mg_sinr


def compute_sinrs(
        scenario: CellScenario,
        gains: GainTable,
        alloc: Allocation,
        config: SimConfig
) -> Tuple[np.ndarray, List[np.ndarray]]:
    """
    CU SINR per channel and, per MG, a ``(N_c, |U_g|)`` receiver-SINR array that is zero on
    channels the MG does not use.

    :raises AllocationError: if a power breaks C1.
    """
    breaches = power_bound_violations(alloc, config)
    if breaches:
        raise AllocationError(f"Allocation breaks the power bounds: {breaches[0]}")
    return _sinrs(gains, alloc, config)


def compute_rates(
        sinrs: Tuple[np.ndarray, Sequence[np.ndarray]],
        group_sizes: Sequence[int],
        config: SimConfig
) -> Tuple[np.ndarray, np.ndarray]:
    """
    CU rates and worst-receiver limited MG rates (bit/s).

    Each MG entry may be a 1-D array of receiver SINRs or a per-channel 2-D array; every
    channel row contributes ``|U_g| B log2(1 + min_r SINR)``.
    """
    cu_sinr, mg_sinrs = sinrs
    bandwidth = config.bandwidth_hz
    cu_rate = bandwidth * np.log2(1.0 + np.asarray(cu_sinr, dtype=float))
    mg_rate = np.zeros(len(mg_sinrs))
    for g, sinr in enumerate(mg_sinrs):
        sinr = np.atleast_2d(np.asarray(sinr, dtype=float))
        if sinr.shape[1] == 0:
            continue
        mg_rate[g] = group_sizes[g] * bandwidth * float(np.sum(np.log2(1.0 + sinr.min(axis=1))))
    return cu_rate, mg_rate


def worst_sinrs(mg_sinrs: Sequence[np.ndarray]) -> np.ndarray:
    """Worst receiver SINR per MG on its best used channel (zero for unassigned MGs)."""
    return np.array([float(np.atleast_2d(s).min(axis=1).max()) if np.size(s) else 0.0 for s in mg_sinrs])


def standalone_cu_rates(gains: GainTable, config: SimConfig) -> np.ndarray:
    """Rate of every CU with its channel unshared."""
    p_c = config.p_c_max_mw
    return config.bandwidth_hz * np.log2(1.0 + p_c * gains.h_cb / config.noise_mw)


def delta_rate(
        g: int,
        k: int,
        scenario: CellScenario,
        gains: GainTable,
        config: SimConfig,
        probe_power: float
) -> float:
    """
    Change of sum-throughput when MG ``g`` alone shares channel ``k`` at ``probe_power``:
    its own rate plus the degraded CU rate minus the unshared CU rate.
    """
    p_c = config.p_c_max_mw
    cu_sinr, receiver_sinrs = channel_sinrs(k, [g], [probe_power], gains, p_c, config.noise_mw)
    cu_rate, mg_rate = compute_rates(([cu_sinr], receiver_sinrs), [gains.group_sizes[g]], config)
    return float(mg_rate[0] + cu_rate[0] - standalone_cu_rates(gains, config)[k])


def delta_rate_table(
        scenario: CellScenario,
        gains: GainTable,
        config: SimConfig,
        probe_power: float
) -> np.ndarray:
    """``delta_rate`` for every (MG, channel) pair at once, shape ``(N_p, N_c)``."""
    p_c = config.p_c_max_mw
    noise = config.noise_mw
    bandwidth = config.bandwidth_hz
    standalone = standalone_cu_rates(gains, config)

    cu_sinr = p_c * gains.h_cb[None, :] / (gains.h_gb * probe_power + noise)
    cu_rate = bandwidth * np.log2(1.0 + cu_sinr)

    mg_rate = np.empty_like(cu_rate)
    for g in range(gains.n_mg):
        serving = gains.h_gr[g][g]
        worst = (probe_power * serving / (gains.h_cr[g].T * p_c + noise)).min(axis=0)
        mg_rate[g] = gains.group_sizes[g] * bandwidth * np.log2(1.0 + worst)
    return mg_rate + cu_rate - standalone[None, :]


def channel_sum_rate(
        k: int,
        members: Sequence[int],
        powers: Sequence[float],
        gains: GainTable,
        config: SimConfig
) -> float:
    """CU rate plus the rates of the MGs sharing channel ``k``."""
    cu_sinr, receiver_sinrs = channel_sinrs(k, members, powers, gains, config.p_c_max_mw, config.noise_mw)
    sizes = gains.group_sizes[np.asarray(members, dtype=int)]
    cu_rate, mg_rate = compute_rates(([cu_sinr], receiver_sinrs), sizes, config)
    return math.fsum([float(cu_rate[0]), *mg_rate.tolist()])


def objective_and_constraints(
        scenario: CellScenario,
        gains: GainTable,
        alloc: Allocation,
        config: SimConfig
) -> RateReport:
    """
    Evaluate the sum-throughput objective and report every C2 breach.

    C1 and C3 breaches are reported structurally; nothing is raised, since some baselines
    knowingly break C2.
    """
    structural = power_bound_violations(alloc, config)
    for g, row_sum in enumerate(alloc.a.sum(axis=1)):
        if row_sum > 1:
            structural.append(ViolationRecord(kind="c3_channels", index=g, value=float(row_sum), threshold=1.0))

    cu_sinr, mg_sinr = _sinrs(gains, alloc, config)
    cu_rate, mg_rate = compute_rates((cu_sinr, mg_sinr), gains.group_sizes, config)
    mg_worst = worst_sinrs(mg_sinr)
    assigned = alloc.a.sum(axis=1) > 0

    violations = [
        ViolationRecord(kind="cu_sinr", index=k, value=float(s), threshold=config.gamma_c_th)
        for k, s in enumerate(cu_sinr) if s < config.gamma_c_th
    ]
    violations += [
        ViolationRecord(kind="mg_sinr", index=g, value=float(mg_worst[g]), threshold=config.gamma_g_th)
        for g in np.flatnonzero(assigned) if mg_worst[g] < config.gamma_g_th
    ]

    deltas = [
        DeltaRateRecord(
            mg=int(g),
            channel=int(k),
            delta_bps=delta_rate(int(g), int(k), scenario, gains, config, float(alloc.p_g[g])),
        )
        for g, k in zip(*np.nonzero(alloc.a))
    ]

    return RateReport(
        cu_sinr=cu_sinr.tolist(),
        mg_worst_sinr=mg_worst.tolist(),
        cu_rate=cu_rate.tolist(),
        mg_rate=mg_rate.tolist(),
        standalone_cu_rate=standalone_cu_rates(gains, config).tolist(),
        delta_rate=deltas,
        objective=math.fsum([*cu_rate.tolist(), *mg_rate.tolist()]),
        c2_violations=violations,
        structural_violations=structural,
    )
