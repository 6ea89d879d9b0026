from baselines.channels import greedy_ia_channels, random_channels, rca_channels
from baselines.power import epa_power, mpa_power, water_filling_terms, wfpa_power
from baselines.oracle import (
    OracleGuardError,
    brute_force_optimum,
    default_power_grid,
    round_down_to_grid,
    score_allocation,
)
