"""Coined quantum walks with quenched coin disorder.

Simulation engine for line, ring, and reflective-segment geometries,
spreading and entanglement observables over disorder ensembles, a
closed-form cross-check of the clean walk, and a deterministic parallel
experiment harness with CLI and HTTP front ends.
"""

__version__ = "0.1.0"

from .engine import (
    CoinField,
    Geometry,
    GeometryKind,
    WalkState,
    apply_coin,
    apply_shift,
    evolve,
    initial_state,
    make_gate,
    sample_coin_field,
    step,
)
from .entanglement import (
    EnsembleDensity,
    ensemble_density,
    entanglement_entropy,
    mean_realization_entropy,
    negativity,
    partial_transpose,
    reduced_coin_density,
)
from .observables import (
    MsdSeries,
    ProbDist,
    ensemble_occupation,
    fidelity,
    flat_distribution,
    growth_exponent,
    mixing_ratio,
    msd,
    occupation,
    return_probability,
)
from .oracle import (
    analytic_amplitudes,
    analytic_state,
    compare_with_engine,
    dispersion,
    hadamard_reference,
    jk_eigenvalues,
    jk_matrix,
)
from .harness import (
    ExperimentConfig,
    ResultRow,
    ResultTable,
    derive_seed,
    emit,
    run_experiment,
)

__all__ = [
    "__version__",
    "CoinField",
    "Geometry",
    "GeometryKind",
    "WalkState",
    "apply_coin",
    "apply_shift",
    "evolve",
    "initial_state",
    "make_gate",
    "sample_coin_field",
    "step",
    "EnsembleDensity",
    "ensemble_density",
    "entanglement_entropy",
    "mean_realization_entropy",
    "negativity",
    "partial_transpose",
    "reduced_coin_density",
    "MsdSeries",
    "ProbDist",
    "ensemble_occupation",
    "fidelity",
    "flat_distribution",
    "growth_exponent",
    "mixing_ratio",
    "msd",
    "occupation",
    "return_probability",
    "analytic_amplitudes",
    "analytic_state",
    "compare_with_engine",
    "dispersion",
    "hadamard_reference",
    "jk_eigenvalues",
    "jk_matrix",
    "ExperimentConfig",
    "ResultRow",
    "ResultTable",
    "derive_seed",
    "emit",
    "run_experiment",
]
