"""Distribution-level quantities of single walks and disorder ensembles.

Covers the occupation profile, return probability, the mixing ratio against
a reference flat distribution, mean squared displacement, the spreading
exponent extracted from a smoothing-spline fit in log-log coordinates, and
state fidelity against a clean reference walk.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import make_smoothing_spline

from .engine import Geometry, GeometryKind, WalkState
from .errors import ContractViolation, DomainError


@dataclass(frozen=True)
class ProbDist:
    """Site occupation probabilities at one instant."""

    geometry: Geometry
    time: int
    p: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.p, dtype=float)
        if p.shape != (self.geometry.sites,):
            raise ContractViolation(
                f"distribution has {p.shape} entries for {self.geometry.sites} sites"
            )
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class MsdSeries:
    """Mean squared displacement against time for one disorder strength."""

    times: np.ndarray
    msd: np.ndarray
    disorder_strength: float = 0.0


def occupation(state: WalkState) -> ProbDist:
    """p_x = |psi_up|^2 + |psi_down|^2 per site."""
    p = (np.abs(state.amplitudes) ** 2).sum(axis=1)
    return ProbDist(state.geometry, state.time, p)


def ensemble_occupation(states: list[WalkState]) -> ProbDist:
    """Arithmetic mean of the per-realization occupation profiles.

    Equals the coin-traced diagonal of the ensemble density matrix, since the
    occupation is linear in the density matrix.
    """
    if not states:
        raise DomainError("ensemble_occupation needs at least one state")
    geometry, time = states[0].geometry, states[0].time
    for s in states[1:]:
        if s.geometry != geometry or s.time != time:
            raise ContractViolation("ensemble states must share geometry and time")
    stacked = np.stack([(np.abs(s.amplitudes) ** 2).sum(axis=1) for s in states])
    return ProbDist(geometry, time, stacked.mean(axis=0))


def return_probability(dist: ProbDist) -> float:
    """Occupation probability at the starting site x = 0."""
    return float(dist.p[dist.geometry.origin])


def flat_distribution(geometry: Geometry, t: int) -> ProbDist:
    """Reference flat distribution at time t.

    On the line this is uniform over the parity-allowed sites inside the
    light cone, 1/(t+1) on {x : |x| <= t, (t - x) even}.  On the ring and
    the reflective segment it is uniform over all sites, 1/L.
    """
    if t < 0:
        raise DomainError(f"time must be nonnegative, got {t}")
    if geometry.kind is GeometryKind.LINE:
        x = geometry.positions()
        p = np.zeros(geometry.sites)
        inside = (np.abs(x) <= t) & ((t - x) % 2 == 0)
        p[inside] = 1.0 / (t + 1)
    else:
        p = np.full(geometry.sites, 1.0 / geometry.sites)
    return ProbDist(geometry, t, p)


def mixing_ratio(dist: ProbDist, flat: ProbDist) -> float:
    """1-norm distance between a distribution and the flat reference.

    Bounded by 2 for any pair of normalized distributions.
    """
    if dist.geometry != flat.geometry:
        raise ContractViolation("distributions live on different geometries")
    if dist.time != flat.time:
        raise ContractViolation(
            f"distribution at t={dist.time} compared against flat at t={flat.time}"
        )
    return float(np.abs(dist.p - flat.p).sum())


def msd(dist: ProbDist) -> float:
    """Mean squared displacement sum_x p_x x^2, measured from the origin."""
    x = dist.geometry.positions().astype(float)
    return float(dist.p @ (x * x))


def growth_exponent(series: MsdSeries, smoothing: float | None = None) -> np.ndarray:
    """Spreading exponent sigma(t) = d ln<x^2> / d ln t.

    Fits a cubic smoothing spline to (ln t, ln msd) with roughness-penalty
    weight ``smoothing``; ``None`` selects the penalty by generalized
    cross-validation.  Returns an array of (t, sigma) rows evaluated at the
    input times.
    """
    t = np.asarray(series.times, dtype=float)
    y = np.asarray(series.msd, dtype=float)
    if t.size != y.size:
        raise ContractViolation("times and msd arrays differ in length")
    if t.size < 10:
        raise DomainError(f"need at least 10 samples to fit, got {t.size}")
    if np.any(t <= 0):
        raise DomainError("times must be strictly positive (drop t = 0)")
    if np.any(y <= 0):
        raise DomainError("msd values must be strictly positive")
    log_t = np.log(t)
    spline = make_smoothing_spline(log_t, np.log(y), lam=smoothing)
    sigma = spline.derivative()(log_t)
    return np.column_stack([t, sigma])


def fidelity(states: list[WalkState], reference: WalkState) -> float:
    """Mean squared overlap (1/N) sum_i |<psi_i|ref>|^2 with a reference state."""
    if not states:
        raise DomainError("fidelity needs at least one state")
    ref = reference.flatten()
    overlaps = np.empty(len(states))
    for i, s in enumerate(states):
        if s.time != reference.time:
            raise DomainError(
                f"state at t={s.time} compared against reference at t={reference.time}"
            )
        if s.geometry != reference.geometry:
            raise ContractViolation("state and reference live on different geometries")
        overlaps[i] = np.abs(np.vdot(ref, s.flatten())) ** 2
    return float(overlaps.mean())
