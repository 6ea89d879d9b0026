import numpy as np
import pytest
import pytest_asyncio
from httpx import ASGITransport, AsyncClient

from config import load_sim_config, with_updates
from main import app


@pytest.fixture(scope="session")
def default_config():
    """The shipped default SimConfig."""
    return load_sim_config()


@pytest.fixture(scope="session")
def small_config(default_config):
    """
    Defaults with a handful of CUs and MGs per cell so full pipelines stay fast.

    Mean 4 CUs, 5 MGs and 2 receivers per group.
    """
    area = default_config.cell_area_m2
    return with_updates(
        default_config,
        lambda_cu=4 / area,
        lambda_gt=5 / area,
        lambda_gr=2 / default_config.cluster_area_m2,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest_asyncio.fixture(scope="function")
async def client():
    """Provide an asynchronous test client for making HTTP requests."""
    async with AsyncClient(transport=ASGITransport(app=app), base_url="http://test") as async_client:
        yield async_client
