from contextlib import asynccontextmanager
from fastapi import FastAPI
import logging

from app.api import routers
from app.config import THREADS, configure_logging
from app.services.experiment import list_bundled

configure_logging()
logger = logging.getLogger(__name__)

VERSION = "1.0.0"


@asynccontextmanager
async def lifespan(app: FastAPI):
    # Startup
    logger.info(f"Starting up Shadowing Simulator API (threads={THREADS})...")
    logger.info(f"Bundled configs: {', '.join(list_bundled()) or 'none'}")
    yield
    # Shutdown
    logger.info("Shutting down Shadowing Simulator API...")


app = FastAPI(
    title="Shadowing Simulator API",
    description="Correlated vs. independent shadowing: experiments and property checks",
    version=VERSION,
    docs_url="/docs",
    redoc_url="/redoc",
    openapi_url="/openapi.json",
    lifespan=lifespan
)

# Подключение всех роутеров
for router in routers:
    app.include_router(router)
    logger.info(f"Router {router.prefix} loaded")


@app.get("/")
async def root():
    return {
        "message": "Shadowing Simulator API",
        "version": VERSION,
        "status": "operational",
        "docs": "/docs",
        "endpoints": [
            "/experiments",
            "/verify",
        ]
    }


@app.get("/health")
async def health_check():
    return {
        "status": "healthy",
        "service": "shadowsim-api",
    }
