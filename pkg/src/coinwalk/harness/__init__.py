"""Experiment orchestration: configuration, seeding, parallel runs, tables."""

from .config import (
    DEFAULT_DISORDER_GRID,
    OBSERVABLES,
    ExperimentConfig,
    config_from_mapping,
    load_config,
    validate_config,
    ensure_valid,
)
from .seeds import derive_seed, seed_grid_duplicates
from .table import CSV_HEADER, ResultRow, ResultTable, emit
from .runner import run_experiment

__all__ = [
    "DEFAULT_DISORDER_GRID",
    "OBSERVABLES",
    "ExperimentConfig",
    "config_from_mapping",
    "load_config",
    "validate_config",
    "ensure_valid",
    "derive_seed",
    "seed_grid_duplicates",
    "CSV_HEADER",
    "ResultRow",
    "ResultTable",
    "emit",
    "run_experiment",
]
