from network.units import dbm_to_linear, linear_to_dbm, db_to_linear, linear_to_db
from network.scenario import (
    CellScenario,
    generate_scenario,
    sample_poisson_count,
    sample_uniform_disc,
)
