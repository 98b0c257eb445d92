"""Main module for the bispec service."""

import os

import uvicorn
from dotenv import load_dotenv
from fastapi import FastAPI
from loguru import logger

from src.bispec import __version__
from src.bispec.api import router as bispec_router

load_dotenv()

LOG_LEVEL = os.environ.get("BISPEC_LOG_LEVEL", "INFO")

# File sink keeps suite timings and calibration warnings; stdout mirrors it
logger.configure(
    handlers=[
        dict(
            sink=os.environ.get("LOG_FILE", "logs/bispec.log"),
            rotation="10 MB",
            level=LOG_LEVEL,
        ),
        dict(sink=lambda msg: print(msg, end=""), level=LOG_LEVEL),
    ]
)

app = FastAPI(
    title="bispec",
    description="Bare-hadron mass spectra, calibration and operator-algebra checks",
    version=__version__,
)

app.include_router(bispec_router)


@app.get("/")
async def root():
    """Root endpoint."""
    return {
        "message": "bispec spectrum service",
        "version": __version__,
        "documentation": "/docs",
        "bispec_endpoints": {
            "mass": "/bispec/mass",
            "table": "/bispec/table",
            "calibration": "/bispec/calibration",
            "probabilities": "/bispec/probabilities",
            "verify": "/bispec/verify/{suite}",
        },
    }


@app.get("/health")
async def health():
    """Health check endpoint."""
    return {"status": "ok"}


if __name__ == "__main__":
    logger.info(f"Starting bispec API v{__version__}")
    uvicorn.run(
        "src.bispec.main:app",
        host=os.environ.get("BISPEC_HOST", "0.0.0.0"),
        port=int(os.environ.get("BISPEC_PORT", "8000")),
        reload=True,
    )
