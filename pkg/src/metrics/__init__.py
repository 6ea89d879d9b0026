from metrics.link import (
    Allocation,
    AllocationError,
    UNASSIGNED,
    full_cu_power,
    channel_sinrs,
    compute_sinrs,
    compute_rates,
    worst_sinrs,
    standalone_cu_rates,
    delta_rate,
    delta_rate_table,
    channel_sum_rate,
    objective_and_constraints,
)
