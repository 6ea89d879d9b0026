import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from schemas.reports import ScenarioDump
from schemas.simulation import SimConfig

logger = logging.getLogger(__name__)

MAX_RECEIVER_RESAMPLES = 1000


def sample_poisson_count(density: float, area: float, rng: np.random.Generator) -> int:
    """
    Draw the number of nodes of a homogeneous PPP falling into a region.

    :param density: Average node density per unit area (nodes/m²).
    :param area: Region area (m²).
    :param rng: Random stream consumed for the draw.
    :return: A Poisson(density * area) count.
    :raises ValueError: if density or area is negative.
    """
    if density < 0 or area < 0:
        raise ValueError(f"density and area must be nonnegative, got density={density}, area={area}")
    return int(rng.poisson(density * area))


def sample_uniform_disc(center: np.ndarray, radius: float, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points in a disc via the square-root radius transform."""
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, count))
    theta = rng.uniform(0.0, 2.0 * np.pi, count)
    return np.column_stack((center[0] + r * np.cos(theta), center[1] + r * np.sin(theta)))


def _sample_cluster(
        parent: np.ndarray,
        count: int,
        config: SimConfig,
        rng: np.random.Generator
) -> np.ndarray:
    points = np.empty((0, 2))
    while points.shape[0] < count:
        batch = sample_uniform_disc(parent, config.d_r, count - points.shape[0], rng)
        inside_cell = np.hypot(batch[:, 0], batch[:, 1]) <= config.cell_radius
        points = np.vstack((points, batch[inside_cell]))
    return points


def _sample_receiver_count(config: SimConfig, rng: np.random.Generator) -> Tuple[int, bool]:
    mean = config.lambda_gr * config.cluster_area_m2
    if mean == 0:
        return 1, True
    resampled = False
    for _ in range(MAX_RECEIVER_RESAMPLES):
        count = sample_poisson_count(config.lambda_gr, config.cluster_area_m2, rng)
        if count >= 1:
            return count, resampled
        resampled = True
    return 1, True


@dataclass(frozen=True)
class CellScenario:
    cu_positions: np.ndarray
    mgtx_positions: np.ndarray
    mgrx_positions: Tuple[np.ndarray, ...]
    seed: int
    bs_position: Tuple[float, float] = (0.0, 0.0)
    resampled_groups: int = 0

    @property
    def n_cu(self) -> int:
        return int(self.cu_positions.shape[0])

    @property
    def n_mg(self) -> int:
        return int(self.mgtx_positions.shape[0])

    @property
    def group_sizes(self) -> np.ndarray:
        return np.array([rx.shape[0] for rx in self.mgrx_positions], dtype=int)

    @property
    def is_degenerate(self) -> bool:
        """A cell without CUs or without MGs has nothing to allocate and is skipped by the harness."""
        return self.n_cu == 0 or self.n_mg == 0

    def subset(self, n_cu: int, n_mg: int) -> "CellScenario":
        """Keep the first `n_cu` CUs and `n_mg` MGs; used to carve oracle-sized instances."""
        return CellScenario(
            cu_positions=self.cu_positions[:n_cu],
            mgtx_positions=self.mgtx_positions[:n_mg],
            mgrx_positions=self.mgrx_positions[:n_mg],
            seed=self.seed,
            bs_position=self.bs_position,
            resampled_groups=self.resampled_groups,
        )

    def to_dump(self) -> ScenarioDump:
        return ScenarioDump(
            seed=self.seed,
            bs_position=self.bs_position,
            cu_positions=self.cu_positions.tolist(),
            mgtx_positions=self.mgtx_positions.tolist(),
            mgrx_positions=[rx.tolist() for rx in self.mgrx_positions],
            resampled_groups=self.resampled_groups,
        )


def generate_scenario(config: SimConfig, seed: int) -> CellScenario:
    """
    Sample CUs and MG transmitters from independent PPPs over the cell disc and each
    MG's receivers from a child PPP in a disc of radius d_r around its transmitter.

    Groups drawn with no receivers are re-drawn (receiver process only), so the MG count
    stays Poisson with mean lambda_gt * cell area. Identical (config, seed) pairs give
    identical scenarios.
    """
    rng = np.random.default_rng(seed)
    origin = np.zeros(2)

    n_cu = sample_poisson_count(config.lambda_cu, config.cell_area_m2, rng)
    n_mg = sample_poisson_count(config.lambda_gt, config.cell_area_m2, rng)
    cu_positions = sample_uniform_disc(origin, config.cell_radius, n_cu, rng)
    mgtx_positions = sample_uniform_disc(origin, config.cell_radius, n_mg, rng)

    receivers = []
    resampled_groups = 0
    for parent in mgtx_positions:
        count, resampled = _sample_receiver_count(config, rng)
        resampled_groups += int(resampled)
        receivers.append(_sample_cluster(parent, count, config, rng))

    if resampled_groups:
        logger.debug("Seed %d: %d group(s) re-drawn after sampling zero receivers", seed, resampled_groups)
    if n_cu == 0 or n_mg == 0:
        logger.info("Seed %d: degenerate scenario (%d CUs, %d MGs)", seed, n_cu, n_mg)

    return CellScenario(
        cu_positions=cu_positions,
        mgtx_positions=mgtx_positions,
        mgrx_positions=tuple(receivers),
        seed=seed,
        resampled_groups=resampled_groups,
    )
