"""Request handlers shared by the HTTP app and the in-process CLI client."""

from __future__ import annotations

import numpy as np

from ..engine import evolve, initial_state, sample_coin_field
from ..errors import DomainError
from ..harness.config import validate_config
from ..harness.runner import run_experiment
from ..harness.seeds import derive_seed
from ..harness.table import ResultRow, ResultTable
from ..oracle import compare_with_engine, default_quad_points
from ..observables import occupation
from .schemas import (
    AmplitudeEntry,
    EnsembleRequest,
    EnsembleResponse,
    OracleComparison,
    OracleRequest,
    OracleResponse,
    ResultRowModel,
    SimulateRequest,
    SimulateResponse,
    ValidateRequest,
    ValidateResponse,
)


def handle_validate(request: ValidateRequest) -> ValidateResponse:
    violations = validate_config(request.config.to_config())
    return ValidateResponse(valid=not violations, violations=violations)


def handle_simulate(request: SimulateRequest) -> SimulateResponse:
    config = request.config.to_config()
    if not 0 <= request.disorder_index < len(config.disorder_strengths):
        raise DomainError(
            f"disorder_index {request.disorder_index} outside the configured "
            f"list of {len(config.disorder_strengths)} strengths"
        )
    if request.realization < 0:
        raise DomainError(f"realization must be nonnegative, got {request.realization}")
    geometry = config.build_geometry()
    w = config.disorder_strengths[request.disorder_index]
    seed = derive_seed(config.master_seed, request.disorder_index, request.realization)
    coin_field = sample_coin_field(geometry, w, seed)
    state = evolve(initial_state(geometry), coin_field, config.steps)[-1]
    positions = geometry.positions()
    amplitudes = None
    if request.include_amplitudes:
        amplitudes = [
            AmplitudeEntry(
                x=int(x),
                re_up=float(np.real(up)),
                im_up=float(np.imag(up)),
                re_down=float(np.real(down)),
                im_down=float(np.imag(down)),
            )
            for x, (up, down) in zip(positions, state.amplitudes)
        ]
    return SimulateResponse(
        geometry=config.geometry,
        sites=geometry.sites,
        time=state.time,
        disorder_strength=w,
        seed=seed,
        norm=state.norm(),
        positions=[int(x) for x in positions],
        occupation=[float(p) for p in occupation(state).p],
        amplitudes=amplitudes,
    )


def handle_ensemble(request: EnsembleRequest) -> EnsembleResponse:
    table = run_experiment(request.config.to_config())
    return EnsembleResponse(
        rows=[
            ResultRowModel(
                W=row.disorder_strength,
                t=row.time,
                observable=row.observable,
                value=row.value,
                std_error=row.std_error,
                N=row.realizations,
            )
            for row in table.rows
        ]
    )


def handle_oracle(request: OracleRequest) -> OracleResponse:
    results = []
    for t in request.times:
        if t < 1:
            raise DomainError(f"comparison times must be >= 1, got {t}")
        n = request.quad_points if request.quad_points is not None else default_quad_points(t)
        results.append(
            OracleComparison(
                time=t,
                quad_points=n,
                max_abs_diff=compare_with_engine(t, request.quad_points),
            )
        )
    return OracleResponse(results=results)


def table_from_rows(rows: list[ResultRowModel]) -> ResultTable:
    """Rebuild a result table from wire-format rows (CLI remote mode)."""
    return ResultTable(
        [
            ResultRow(
                disorder_strength=row.W,
                time=row.t,
                observable=row.observable,
                value=row.value,
                std_error=row.std_error,
                realizations=row.N,
            )
            for row in rows
        ]
    )
