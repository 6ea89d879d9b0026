from fastapi import FastAPI

from config import get_settings
from config.logging import configure_logging
from routes import simulator_router

configure_logging(get_settings().LOG_LEVEL)

app = FastAPI(
    title="D2D underlay simulator",
    description="Channel and power allocation for multicast D2D groups sharing cellular uplink channels"
)

api_version_prefix = "/api/v1"

app.include_router(simulator_router, prefix=f"{api_version_prefix}/simulator", tags=["simulator"])
