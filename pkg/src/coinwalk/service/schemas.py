"""Request and response models for the HTTP service.

The CLI builds the same models and either dispatches them in-process or posts
them to a remote server, so the wire format is defined in exactly one place.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

from ..harness.config import DEFAULT_DISORDER_GRID, OBSERVABLES, ExperimentConfig


class ExperimentConfigModel(BaseModel):
    geometry: Literal["line", "ring", "segment"] = "line"
    sites: int | None = None
    steps: int = 100
    disorder_strengths: list[float] = Field(
        default_factory=lambda: list(DEFAULT_DISORDER_GRID)
    )
    realizations: int = 1000
    master_seed: int = 2024
    snapshot_times: list[int] | None = None
    observables: list[str] = Field(default_factory=lambda: list(OBSERVABLES))
    output_format: Literal["csv", "json"] = "csv"
    spline_smoothing: float | None = None
    quad_points: int | None = None

    def to_config(self) -> ExperimentConfig:
        return ExperimentConfig(
            geometry=self.geometry,
            sites=self.sites,
            steps=self.steps,
            disorder_strengths=tuple(self.disorder_strengths),
            realizations=self.realizations,
            master_seed=self.master_seed,
            snapshot_times=None
            if self.snapshot_times is None
            else tuple(self.snapshot_times),
            observables=tuple(self.observables),
            output_format=self.output_format,
            spline_smoothing=self.spline_smoothing,
            quad_points=self.quad_points,
        )

    @classmethod
    def from_config(cls, config: ExperimentConfig) -> "ExperimentConfigModel":
        return cls(
            geometry=config.geometry,
            sites=config.sites,
            steps=config.steps,
            disorder_strengths=list(config.disorder_strengths),
            realizations=config.realizations,
            master_seed=config.master_seed,
            snapshot_times=None
            if config.snapshot_times is None
            else list(config.snapshot_times),
            observables=list(config.observables),
            output_format=config.output_format,
            spline_smoothing=config.spline_smoothing,
            quad_points=config.quad_points,
        )


class ValidateRequest(BaseModel):
    config: ExperimentConfigModel


class ValidateResponse(BaseModel):
    valid: bool
    violations: list[str]


class SimulateRequest(BaseModel):
    config: ExperimentConfigModel
    disorder_index: int = 0
    realization: int = 0
    include_amplitudes: bool = True


class AmplitudeEntry(BaseModel):
    x: int
    re_up: float
    im_up: float
    re_down: float
    im_down: float


class SimulateResponse(BaseModel):
    geometry: str
    sites: int
    time: int
    disorder_strength: float
    seed: int
    norm: float
    positions: list[int]
    occupation: list[float]
    amplitudes: list[AmplitudeEntry] | None


class EnsembleRequest(BaseModel):
    config: ExperimentConfigModel


class ResultRowModel(BaseModel):
    W: float
    t: int
    observable: str
    value: float
    std_error: float | None
    N: int


class EnsembleResponse(BaseModel):
    rows: list[ResultRowModel]


class OracleRequest(BaseModel):
    times: list[int] = Field(default_factory=lambda: [20, 40, 100])
    quad_points: int | None = None


class OracleComparison(BaseModel):
    time: int
    quad_points: int
    max_abs_diff: float


class OracleResponse(BaseModel):
    results: list[OracleComparison]


class HealthResponse(BaseModel):
    status: str
    version: str


class ErrorBody(BaseModel):
    category: str
    message: str
