"""FastAPI application exposing the simulation package.

Long ensemble runs execute synchronously within the request; clients running
full-scale ensembles (N = 1000, T = 1000) should prefer the CLI's in-process
mode or set generous client timeouts.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import CoinWalkError, ConfigValidationError, ContractViolation, DomainError
from . import handlers
from .schemas import (
    EnsembleRequest,
    EnsembleResponse,
    ErrorBody,
    HealthResponse,
    OracleRequest,
    OracleResponse,
    SimulateRequest,
    SimulateResponse,
    ValidateRequest,
    ValidateResponse,
)

_CLIENT_ERRORS = (ConfigValidationError, DomainError, ContractViolation)


def create_app() -> FastAPI:
    app = FastAPI(title="coinwalk", version=__version__)

    @app.exception_handler(CoinWalkError)
    async def _coinwalk_error(request: Request, exc: CoinWalkError) -> JSONResponse:
        status = 422 if isinstance(exc, _CLIENT_ERRORS) else 500
        body = ErrorBody(category=exc.category, message=str(exc))
        return JSONResponse(status_code=status, content=body.model_dump())

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/validate", response_model=ValidateResponse)
    def validate(request: ValidateRequest) -> ValidateResponse:
        return handlers.handle_validate(request)

    @app.post("/simulate", response_model=SimulateResponse)
    def simulate(request: SimulateRequest) -> SimulateResponse:
        return handlers.handle_simulate(request)

    @app.post("/ensemble", response_model=EnsembleResponse)
    def ensemble(request: EnsembleRequest) -> EnsembleResponse:
        return handlers.handle_ensemble(request)

    @app.post("/oracle", response_model=OracleResponse)
    def oracle(request: OracleRequest) -> OracleResponse:
        return handlers.handle_oracle(request)

    return app


app = create_app()
