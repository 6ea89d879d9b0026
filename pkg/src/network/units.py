import numpy as np


def dbm_to_linear(x):
    """Convert dBm (or dB) to mW (or a linear ratio); works on scalars and arrays."""
    if np.ndim(x):
        return np.power(10.0, np.asarray(x, dtype=float) / 10.0)
    return 10.0 ** (float(x) / 10.0)


def linear_to_dbm(power_mw):
    """Convert mW to dBm; zero power maps to -inf."""
    with np.errstate(divide="ignore"):
        result = 10.0 * np.log10(np.asarray(power_mw, dtype=float))
    return result if np.ndim(power_mw) else float(result)


db_to_linear = dbm_to_linear
linear_to_db = linear_to_dbm
