import logging
from typing import Optional

import pandas as pd

from harness.runner import HarnessError, run_point
from schemas.reports import RESULT_COLUMNS
from schemas.simulation import SimConfig, SweepSpec

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.6g"


def run_sweep(spec: SweepSpec, config: SimConfig, workers: Optional[int] = None) -> pd.DataFrame:
    """
    Run every sweep point and collect one row per (axis value, scheme), ordered by axis
    value then by the order of ``spec.schemes``.

    :raises HarnessError: naming the axis value of the first point that fails.
    """
    rows = []
    for value in spec.values:
        try:
            rows += run_point(
                config,
                spec.axis,
                value,
                spec.schemes,
                spec.instances_per_point,
                spec.base_seed,
                workers=workers,
            )
        except HarnessError:
            raise
        except Exception as exc:
            raise HarnessError(f"Sweep point {spec.axis.value}={value:g} failed: {exc}") from exc
        logger.info("Finished sweep point %s=%g", spec.axis.value, value)
    return pd.DataFrame([row.model_dump() for row in rows], columns=RESULT_COLUMNS)


def sweep_to_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
