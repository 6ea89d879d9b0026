from config.settings import get_settings
from config.simulation import (
    load_sim_config,
    apply_overrides,
    with_updates,
    UnknownConfigKeyError,
    ConfigValueError,
)
