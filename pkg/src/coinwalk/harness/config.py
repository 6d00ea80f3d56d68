"""Experiment configuration: defaults, YAML loading, validation.

The config file is YAML with two optional nested sections::

    geometry: line            # line | ring | segment
    sites: 201                # optional; line defaults to 2*steps+1, others to 61
    steps: 100
    disorder_strengths: [0.0, 0.2, 0.4, 0.6, 0.8, 1.0]
    realizations: 1000
    master_seed: 2024
    snapshot_times: [100]     # occupation profiles / negativity sampled here
    observables: [occupation, p0, fidelity, mixing, msd, sigma, ee, negativity]
    output:
      format: csv             # csv | json
      path: results.csv
    analysis:
      spline_smoothing: null  # null -> generalized cross-validation
      quad_points: null       # oracle runs; null -> 16*(t+1)

CLI flags override file keys; validation reports every violation at once.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Mapping

import yaml

from ..engine import Geometry, GeometryKind
from ..errors import ConfigValidationError, OutputError
from .seeds import seed_grid_duplicates

OBSERVABLES = ("occupation", "p0", "fidelity", "mixing", "msd", "sigma", "ee", "negativity")
DEFAULT_DISORDER_GRID = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)
DEFAULT_RING_SITES = 61

# sigma needs at least 10 samples at t >= 10
_MIN_STEPS_FOR_SIGMA = 19


@dataclass(frozen=True)
class ExperimentConfig:
    geometry: str = "line"
    sites: int | None = None
    steps: int = 100
    disorder_strengths: tuple[float, ...] = DEFAULT_DISORDER_GRID
    realizations: int = 1000
    master_seed: int = 2024
    snapshot_times: tuple[int, ...] | None = None
    observables: tuple[str, ...] = OBSERVABLES
    output_format: str = "csv"
    output_path: str | None = None
    spline_smoothing: float | None = None
    quad_points: int | None = None

    def resolved_sites(self) -> int:
        if self.sites is not None:
            return self.sites
        if self.geometry == "line":
            return 2 * self.steps + 1
        return DEFAULT_RING_SITES

    def resolved_snapshots(self) -> tuple[int, ...]:
        if self.snapshot_times is None:
            return (self.steps,)
        return self.snapshot_times

    def build_geometry(self) -> Geometry:
        return Geometry(GeometryKind(self.geometry), self.resolved_sites())


def load_config(path: str | Path) -> ExperimentConfig:
    """Read a YAML config file, flattening the output/analysis sections."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OutputError(f"cannot read config file {path}: {exc}") from exc
    data = yaml.safe_load(text) or {}
    if not isinstance(data, dict):
        raise ConfigValidationError([f"config file {path} must contain a mapping"])
    return config_from_mapping(data)


def config_from_mapping(data: Mapping[str, Any]) -> ExperimentConfig:
    flat = dict(data)
    output = flat.pop("output", {}) or {}
    analysis = flat.pop("analysis", {}) or {}
    if "format" in output:
        flat.setdefault("output_format", output["format"])
    if "path" in output:
        flat.setdefault("output_path", output["path"])
    for key in ("spline_smoothing", "quad_points"):
        if key in analysis:
            flat.setdefault(key, analysis[key])
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = sorted(set(flat) - known)
    if unknown:
        raise ConfigValidationError([f"unknown config key: {k}" for k in unknown])
    for key in ("disorder_strengths", "snapshot_times", "observables"):
        if key in flat and flat[key] is not None:
            flat[key] = tuple(flat[key])
    return ExperimentConfig(**flat)


def apply_overrides(config: ExperimentConfig, **overrides: Any) -> ExperimentConfig:
    """Replace config fields with non-None override values (CLI flags)."""
    updates = {k: v for k, v in overrides.items() if v is not None}
    return replace(config, **updates) if updates else config


def validate_config(config: ExperimentConfig) -> list[str]:
    """Collect every violation; an empty list means the config is runnable."""
    problems: list[str] = []
    if config.geometry not in tuple(k.value for k in GeometryKind):
        problems.append(f"geometry must be one of line/ring/segment, got {config.geometry!r}")
    if config.steps < 1:
        problems.append(f"steps must be >= 1, got {config.steps}")
    if config.realizations < 1:
        problems.append(f"realizations must be >= 1, got {config.realizations}")
    if not isinstance(config.master_seed, int) or config.master_seed < 0:
        problems.append(f"master_seed must be a nonnegative integer, got {config.master_seed!r}")
    if not config.disorder_strengths:
        problems.append("disorder_strengths must not be empty")
    for w in config.disorder_strengths:
        if not 0.0 <= w <= 1.0:
            problems.append(f"disorder strength {w} outside [0, 1]")
    sites = config.resolved_sites()
    if sites < 3 or sites % 2 == 0:
        problems.append(f"sites must be odd and >= 3, got {sites}")
    elif config.geometry == "line" and sites < 2 * config.steps + 1:
        problems.append(
            f"line window of {sites} sites cannot hold {config.steps} steps; "
            f"need at least {2 * config.steps + 1}"
        )
    snapshots = config.resolved_snapshots()
    if list(snapshots) != sorted(set(snapshots)):
        problems.append("snapshot_times must be strictly increasing")
    for t in snapshots:
        if not 0 <= t <= config.steps:
            problems.append(f"snapshot time {t} outside [0, {config.steps}]")
    if not config.observables:
        problems.append("observables must not be empty")
    for name in config.observables:
        if name not in OBSERVABLES:
            problems.append(f"unknown observable {name!r}")
    if "sigma" in config.observables and config.steps < _MIN_STEPS_FOR_SIGMA:
        problems.append(
            f"sigma extraction needs steps >= {_MIN_STEPS_FOR_SIGMA}, got {config.steps}"
        )
    if config.output_format not in ("csv", "json"):
        problems.append(f"output format must be csv or json, got {config.output_format!r}")
    if config.spline_smoothing is not None and config.spline_smoothing < 0:
        problems.append(f"spline_smoothing must be >= 0, got {config.spline_smoothing}")
    if config.quad_points is not None and config.quad_points < 2:
        problems.append(f"quad_points must be >= 2, got {config.quad_points}")
    if not problems and isinstance(config.master_seed, int) and config.master_seed >= 0:
        duplicates = seed_grid_duplicates(
            config.master_seed, len(config.disorder_strengths), config.realizations
        )
        if duplicates:
            problems.append(f"seed grid has {len(duplicates)} collisions: {duplicates[:3]}")
    return problems


def ensure_valid(config: ExperimentConfig) -> None:
    problems = validate_config(config)
    if problems:
        raise ConfigValidationError(problems)
