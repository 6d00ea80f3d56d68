"""Coin-walker entanglement measures.

For a single pure realization the right quantifier is the von Neumann entropy
of the reduced coin state.  A disorder ensemble is a mixed state, where the
entropy is no longer faithful; there the negativity, built from the partially
transposed ensemble density matrix, serves as the entanglement witness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import Geometry, WalkState
from .errors import ContractViolation, DomainError, EigenSolverError

# Reduced-density eigenvalues inside (-NEG_EIG_TOL, 0) are rounding noise and
# get clipped; anything below is treated as a genuinely broken input.
NEG_EIG_TOL = 1e-10


@dataclass(frozen=True)
class EnsembleDensity:
    """Mixed state (1/N) sum_i |psi_i><psi_i| over the (site x coin) basis."""

    geometry: Geometry
    time: int
    realizations: int
    rho: np.ndarray

    def __post_init__(self) -> None:
        dim = 2 * self.geometry.sites
        if self.rho.shape != (dim, dim):
            raise ContractViolation(
                f"density matrix shape {self.rho.shape} does not match dimension {dim}"
            )


def reduced_coin_density(state: WalkState) -> np.ndarray:
    """2x2 coin density matrix with the walker traced out.

    rho_c[s, s'] = sum_x psi_{x,s} conj(psi_{x,s'}).
    """
    a = state.amplitudes
    return a.T @ a.conj()


def entanglement_entropy(rho: np.ndarray, trace_tol: float = 1e-10) -> float:
    """Von Neumann entropy -sum lam ln lam of a coin density matrix.

    Natural logarithm, with 0 ln 0 = 0.  Eigenvalues inside the negative
    rounding band are clipped to zero; larger negatives raise.
    """
    rho = np.asarray(rho)
    trace = float(np.real(np.trace(rho)))
    if abs(trace - 1.0) > trace_tol:
        raise DomainError(f"density matrix trace {trace!r} deviates from 1")
    lam = np.linalg.eigvalsh(rho)
    if lam.min() < -NEG_EIG_TOL:
        raise DomainError(f"density matrix has negative eigenvalue {lam.min()!r}")
    lam = np.clip(lam, 0.0, None)
    nonzero = lam[lam > 0.0]
    return float(-(nonzero * np.log(nonzero)).sum())


def mean_realization_entropy(states: list[WalkState]) -> float:
    """Average the per-realization coin entropies.

    Deliberately distinct from the entropy of the averaged coin density: the
    entropy is nonlinear, so the two differ for any nontrivial ensemble.
    """
    if not states:
        raise DomainError("mean_realization_entropy needs at least one state")
    time = states[0].time
    total = 0.0
    for s in states:
        if s.time != time:
            raise ContractViolation("ensemble states must share the same time")
        total += entanglement_entropy(reduced_coin_density(s))
    return total / len(states)


def ensemble_density(states: list[WalkState]) -> EnsembleDensity:
    """Accumulate (1/N) sum |psi><psi|; Hermitian by construction."""
    if not states:
        raise DomainError("ensemble_density needs at least one state")
    geometry, time = states[0].geometry, states[0].time
    dim = 2 * geometry.sites
    rho = np.zeros((dim, dim), dtype=np.complex128)
    for s in states:
        if s.geometry != geometry or s.time != time:
            raise ContractViolation("ensemble states must share geometry and time")
        psi = s.flatten()
        rho += psi[:, None] * psi.conj()[None, :]
    rho /= len(states)
    return EnsembleDensity(geometry, time, len(states), rho)


def partial_transpose(ens: EnsembleDensity) -> np.ndarray:
    """Transpose the coin indices only: rho'_{xs,x's'} = rho_{xs',x's}.

    The result stays Hermitian with real eigenvalues summing to tr rho = 1.
    """
    sites = ens.geometry.sites
    dim = 2 * sites
    blocks = ens.rho.reshape(sites, 2, sites, 2)
    return blocks.transpose(0, 3, 2, 1).reshape(dim, dim)


def negativity(ens: EnsembleDensity) -> float:
    """Entanglement negativity (sum_i |lam'_i| - 1) / 2 >= 0.

    lam' are the eigenvalues of the partial transpose; separable states have
    none negative, so their negativity vanishes.
    """
    transposed = partial_transpose(ens)
    try:
        lam = np.linalg.eigvalsh(transposed)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(
            f"eigendecomposition of the {transposed.shape[0]}x{transposed.shape[0]} "
            f"partial transpose failed: {exc}"
        ) from exc
    return max(0.0, 0.5 * (np.abs(lam).sum() - 1.0))
