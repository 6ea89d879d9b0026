import hashlib
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Iterable, List, Optional, Sequence

from tqdm import tqdm

from config import get_settings, with_updates
from harness.instance import InstanceSummary, evaluate_seed
from schemas.reports import ResultRow
from schemas.simulation import SchemeId, SimConfig, SweepAxis

logger = logging.getLogger(__name__)

CI95_Z = 1.96
MAX_SKIPPED_FRACTION = 0.5


class HarnessError(RuntimeError):
    pass


def stable_hash(base_seed: int, axis_value: float, index: int) -> int:
    """64-bit instance seed that does not depend on the interpreter's hash randomization."""
    digest = hashlib.blake2b(f"{base_seed}:{axis_value!r}:{index}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def mean_and_ci95(values: Sequence[float]) -> tuple[float, float]:
    """Sample mean and normal-approximation 95% half-width; the half-width is 0 for one sample."""
    n = len(values)
    mean = math.fsum(values) / n
    if n == 1:
        return mean, 0.0
    variance = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, CI95_Z * math.sqrt(variance) / math.sqrt(n)


def _mean(values: Iterable[float]) -> float:
    values = list(values)
    return math.fsum(values) / len(values)


def _summarize(
        axis: SweepAxis,
        axis_value: float,
        scheme: SchemeId,
        summaries: List[InstanceSummary],
        skipped: int
) -> ResultRow:
    mean_objective, ci95 = mean_and_ci95([s.objective for s in summaries])
    return ResultRow(
        axis=axis.value,
        axis_value=axis_value,
        scheme_channel=scheme.channel_scheme.value,
        scheme_power=scheme.power_scheme.value,
        mean_objective_bps=mean_objective,
        ci95_bps=ci95,
        mean_cu_rate_bps=_mean(s.cu_rate for s in summaries),
        mean_mg_rate_bps=_mean(s.mg_rate for s in summaries),
        violation_rate=_mean(float(s.violated) for s in summaries),
        mean_outer_iters=_mean(s.outer_iters for s in summaries),
        mean_color_rounds=_mean(s.color_rounds for s in summaries),
        mean_power_iters=_mean(s.power_iters for s in summaries),
        excluded_mg_fraction=_mean(s.excluded_fraction for s in summaries),
        instances=len(summaries),
        skipped=skipped,
    )


def run_point(
        config: SimConfig,
        axis: SweepAxis,
        axis_value: float,
        schemes: Sequence[SchemeId],
        instances: int,
        base_seed: int,
        workers: Optional[int] = None
) -> List[ResultRow]:
    """
    Evaluate every scheme on the same ``instances`` seeded scenarios at one sweep point.

    :param axis_value: Value bound to ``axis`` in ``config`` for this point.
    :param workers: Worker processes; defaults to the application settings.
    :return: One row per scheme, in ``schemes`` order.
    :raises HarnessError: if more than half of the instances are degenerate.
    """
    settings = get_settings()
    workers = settings.WORKERS if workers is None else workers
    point_config = with_updates(config, **{axis.value: axis_value})
    seeds = [stable_hash(base_seed, axis_value, i) for i in range(instances)]
    job = partial(evaluate_seed, point_config, schemes=list(schemes))

    progress = dict(total=instances, desc=f"{axis.value}={axis_value:g}", disable=not settings.SHOW_PROGRESS)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(tqdm(executor.map(job, seeds, chunksize=max(1, instances // (4 * workers))), **progress))
    else:
        results = [job(seed) for seed in tqdm(seeds, **progress)]

    evaluated = [r for r in results if r is not None]
    skipped = instances - len(evaluated)
    if skipped:
        logger.info("%s=%g: skipped %d of %d degenerate instance(s)", axis.value, axis_value, skipped, instances)
    if not evaluated or skipped > MAX_SKIPPED_FRACTION * instances:
        raise HarnessError(
            f"{axis.value}={axis_value:g}: {skipped} of {instances} instances have no CUs or no MGs"
        )

    return [
        _summarize(axis, axis_value, scheme, [r[idx] for r in evaluated], skipped)
        for idx, scheme in enumerate(schemes)
    ]
