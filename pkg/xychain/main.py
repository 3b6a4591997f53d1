"""fastapi backend for xy-chain state transfer points, sweeps, peaks and verification"""

import logging
from typing import List

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from . import __version__
from .config import PRESETS, get_settings
from .exceptions import InvalidParameterError
from .schemas import (
    PeakRecord,
    PeaksRequest,
    PointRecord,
    PointRequest,
    SweepRequest,
    SweepResult,
    VerifyReport,
    VerifyRequest,
)
from .services import sweep_service
from .services.chain_model import build_chain
from .utils import ParameterValidator

logger = logging.getLogger(__name__)

# get application settings
settings = get_settings()

app = FastAPI(
    title=settings.api_title,
    description=settings.api_description,
    version=settings.api_version
)

# add cors middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.cors_origins,
    allow_credentials=settings.cors_credentials,
    allow_methods=settings.cors_methods,
    allow_headers=settings.cors_headers,
)


def _fail(action: str, error: Exception) -> HTTPException:
    if isinstance(error, InvalidParameterError):
        return HTTPException(status_code=400, detail=str(error))
    logger.exception("failed to %s", action)
    return HTTPException(status_code=500, detail=f"failed to {action}: {str(error)}")


@app.get("/")
async def root():
    """root endpoint"""
    return {
        "message": "xy-chain state transfer api",
        "version": __version__,
        "endpoints": {
            "point": "/point",
            "sweep": "/sweep",
            "peaks": "/peaks",
            "verify": "/verify",
            "presets": "/presets",
            "health": "/health"
        }
    }


@app.get("/presets")
async def presets():
    """regime presets (field, coupling)"""
    return PRESETS


@app.post("/point", response_model=PointRecord)
async def evaluate_point(request: PointRequest):
    """evaluate one (t, gamma) point

    args:
        request: chain, receiver, input state and time

    returns:
        bloch vector, fidelity, one-tangle and entropy
    """
    is_valid, error_msg = ParameterValidator.validate_receiver(request.receiver, request.n_sites)
    if not is_valid:
        raise HTTPException(status_code=400, detail=error_msg)

    try:
        spec = build_chain(request.coupling, request.anisotropy, request.field, request.n_sites)
        input_state = sweep_service.resolve_input_state(request.alpha, request.vacuum)
        return sweep_service.run_point(spec, request.t, request.receiver, input_state)
    except Exception as e:
        raise _fail("evaluate point", e)


@app.post("/sweep", response_model=SweepResult)
async def evaluate_sweep(request: SweepRequest):
    """evaluate a (t, gamma) grid

    args:
        request: chain, receiver, input state and grid

    returns:
        metadata and rows, gamma-major then t
    """
    is_valid, error_msg = ParameterValidator.validate_grid_size(
        request.t_steps, request.gamma_steps, settings.api_max_cells
    )
    if not is_valid:
        raise HTTPException(status_code=400, detail=error_msg)

    try:
        config = sweep_service.build_sweep_config(
            n_sites=request.n_sites,
            coupling=request.coupling,
            field=request.field,
            receiver=request.receiver,
            input_state=sweep_service.resolve_input_state(request.alpha, request.vacuum),
            t_min=request.t_min,
            t_max=request.t_max,
            t_steps=request.t_steps,
            gamma_min=request.gamma_min,
            gamma_max=request.gamma_max,
            gamma_steps=request.gamma_steps,
            unbounded_gamma=request.unbounded_gamma,
        )
        return sweep_service.run_sweep(config, timestamp=request.timestamp)
    except Exception as e:
        raise _fail("run sweep", e)


@app.post("/peaks", response_model=List[PeakRecord])
async def peaks(request: PeaksRequest):
    """strict local maxima of a sweep result, or the first prominent one along t"""
    try:
        rows = request.result.rows
        if request.first_along_t:
            peak = sweep_service.first_peak(rows, request.quantity, request.gamma, request.prominence)
            return [peak] if peak is not None else []
        return sweep_service.find_peaks(rows, request.quantity, request.top_k)
    except Exception as e:
        raise _fail("find peaks", e)


@app.post("/verify", response_model=VerifyReport)
async def verify(request: VerifyRequest):
    """compare the free-fermion pipeline with exact diagonalization

    a failed comparison is still a 200 response with passed=false.
    """
    try:
        return sweep_service.run_verify(
            n_sites=request.n_sites,
            coupling=request.coupling,
            field=request.field,
            receiver=request.receiver,
            input_state=sweep_service.resolve_input_state(request.alpha, request.vacuum),
            points=request.points,
            seed=request.seed,
            t_range=(request.t_min, request.t_max),
            gamma_range=(request.gamma_min, request.gamma_max),
        )
    except Exception as e:
        raise _fail("verify", e)


@app.get("/health")
async def health_check():
    """health check endpoint"""
    return {
        "status": "healthy",
        "version": __version__
    }
