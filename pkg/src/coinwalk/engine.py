"""State representation and unitary evolution of the disordered coined walk.

The composite state lives on ``sites x {up, down}``.  Coin index 0 is "up"
(the component shifted one site to the right), coin index 1 is "down" (shifted
left).  One time step applies a site-dependent two-level gate followed by the
coin-conditioned shift; both maps are exactly unitary, so the norm is
conserved up to floating-point rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ContractViolation, DomainError, WindowOverflowError

SQRT1_2 = 1.0 / math.sqrt(2.0)


class GeometryKind(str, Enum):
    LINE = "line"
    RING = "ring"
    SEGMENT = "segment"


@dataclass(frozen=True)
class Geometry:
    """Lattice on which the walker moves.

    ``sites`` must be odd and at least 3 so that x = 0 is the unique center
    site.  For ``LINE`` the array is a finite window around the origin and
    the caller must size it so the wavefront never reaches the edge
    (``sites >= 2 * steps + 1``); :func:`apply_shift` raises if it does.
    """

    kind: GeometryKind
    sites: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", GeometryKind(self.kind))
        if self.sites < 3 or self.sites % 2 == 0:
            raise DomainError(f"sites must be odd and >= 3, got {self.sites}")

    @property
    def origin(self) -> int:
        return self.sites // 2

    def positions(self) -> np.ndarray:
        """Signed site coordinates with the origin at x = 0."""
        return np.arange(self.sites) - self.origin


@dataclass
class WalkState:
    """Complex amplitudes over (site, coin) for one realization.

    ``amplitudes`` has shape ``(sites, 2)``, site-major with the coin index
    fastest-varying; column 0 holds the right-moving ("up") component.
    """

    geometry: Geometry
    amplitudes: np.ndarray
    time: int = 0

    def norm(self) -> float:
        return float(np.sqrt((np.abs(self.amplitudes) ** 2).sum()))

    def copy(self) -> "WalkState":
        return WalkState(self.geometry, self.amplitudes.copy(), self.time)

    def flatten(self) -> np.ndarray:
        """State vector of length ``2 * sites`` in the (site x coin) basis."""
        return self.amplitudes.reshape(-1)


@dataclass(frozen=True)
class CoinField:
    """Quenched per-site coin parameters for one disorder realization.

    The field is drawn once and reused for every time step.  Square roots of
    ``r`` and ``1 - r`` are precomputed since the coin application needs them
    at every step.
    """

    geometry: Geometry
    disorder_strength: float
    seed: int
    r: np.ndarray = field(repr=False)
    sqrt_r: np.ndarray = field(init=False, repr=False, default=None)
    sqrt_1mr: np.ndarray = field(init=False, repr=False, default=None)

    def __post_init__(self) -> None:
        r = np.asarray(self.r, dtype=float)
        if r.shape != (self.geometry.sites,):
            raise ContractViolation(
                f"coin field has {r.shape} entries for {self.geometry.sites} sites"
            )
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "sqrt_r", np.sqrt(r))
        object.__setattr__(self, "sqrt_1mr", np.sqrt(1.0 - r))


def make_gate(r: float) -> np.ndarray:
    """Two-level coin gate sqrt(r)*Z + sqrt(1-r)*X in the (up, down) basis.

    Hermitian, involutory and unitary for every r in [0, 1]; reduces to X,
    the balanced (Hadamard) coin, and Z at r = 0, 1/2, 1.
    """
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"coin parameter r must lie in [0, 1], got {r}")
    sr = math.sqrt(r)
    sq = math.sqrt(1.0 - r)
    return np.array([[sr, sq], [sq, -sr]], dtype=np.complex128)


def sample_coin_field(geometry: Geometry, disorder_strength: float, seed: int) -> CoinField:
    """Draw the quenched field r_x = (1 + W * xi_x) / 2 with xi i.i.d. U[-1, 1].

    The generator is numpy's PCG64 seeded with ``seed``, so identical
    arguments always reproduce the exact same field.  W = 0 yields r = 1/2
    at every site exactly.
    """
    if not 0.0 <= disorder_strength <= 1.0:
        raise DomainError(
            f"disorder strength must lie in [0, 1], got {disorder_strength}"
        )
    rng = np.random.default_rng(seed)
    xi = rng.uniform(-1.0, 1.0, geometry.sites)
    r = 0.5 * (1.0 + disorder_strength * xi)
    return CoinField(geometry, disorder_strength, seed, r)


def initial_state(geometry: Geometry) -> WalkState:
    """Walker localized at the origin with coin (i, 1)/sqrt(2).

    This coin state makes the clean walk drift-free, so the occupation
    profile stays symmetric under x -> -x.
    """
    amps = np.zeros((geometry.sites, 2), dtype=np.complex128)
    amps[geometry.origin, 0] = 1j * SQRT1_2
    amps[geometry.origin, 1] = SQRT1_2
    return WalkState(geometry, amps, 0)


def apply_coin(state: WalkState, coin_field: CoinField) -> WalkState:
    """Apply the site-local gate G(r_x) to every coin doublet.

    Site populations |psi_up|^2 + |psi_down|^2 are unchanged because each
    G(r_x) is unitary on the coin factor alone.
    """
    if coin_field.geometry != state.geometry:
        raise ContractViolation("state and coin field belong to different geometries")
    a = state.amplitudes
    out = np.empty_like(a)
    out[:, 0] = coin_field.sqrt_r * a[:, 0] + coin_field.sqrt_1mr * a[:, 1]
    out[:, 1] = coin_field.sqrt_1mr * a[:, 0] - coin_field.sqrt_r * a[:, 1]
    return WalkState(state.geometry, out, state.time)


def apply_shift(state: WalkState) -> WalkState:
    """Move up-amplitudes one site right and down-amplitudes one site left.

    Boundary handling by geometry:
      line     -- amplitudes must never sit on the outermost sites facing
                  outward; raises WindowOverflowError if they do.
      ring     -- indices wrap modulo the number of sites.
      segment  -- flip-flop walls: at the right edge up turns into down on
                  the same site, mirrored at the left edge.

    Every branch is a permutation of basis states, hence exactly unitary.
    """
    a = state.amplitudes
    out = np.zeros_like(a)
    kind = state.geometry.kind
    if kind is GeometryKind.LINE:
        if a[-1, 0] != 0 or a[0, 1] != 0:
            raise WindowOverflowError(
                f"wavefront reached the simulation window edge at time {state.time}; "
                f"allocate at least 2 * steps + 1 sites"
            )
        out[1:, 0] = a[:-1, 0]
        out[:-1, 1] = a[1:, 1]
    elif kind is GeometryKind.RING:
        out[:, 0] = np.roll(a[:, 0], 1)
        out[:, 1] = np.roll(a[:, 1], -1)
    else:
        out[1:, 0] = a[:-1, 0]
        out[:-1, 1] = a[1:, 1]
        out[-1, 1] += a[-1, 0]
        out[0, 0] += a[0, 1]
    return WalkState(state.geometry, out, state.time)


def step(state: WalkState, coin_field: CoinField) -> WalkState:
    """One full evolution step: coin, then shift, then advance the clock."""
    shifted = apply_shift(apply_coin(state, coin_field))
    shifted.time = state.time + 1
    return shifted


def evolve(
    state: WalkState,
    coin_field: CoinField,
    steps: int,
    snapshot_times: tuple[int, ...] | list[int] = (),
) -> list[WalkState]:
    """Run the walk up to absolute time ``steps`` and collect snapshots.

    ``snapshot_times`` must be sorted and lie within [state.time, steps]; the
    final state is always included, so ``evolve(s, f, 0)`` returns just the
    starting state.
    """
    if steps < state.time:
        raise DomainError(f"cannot evolve to time {steps} from time {state.time}")
    times = list(snapshot_times)
    if times != sorted(times):
        raise DomainError("snapshot_times must be sorted")
    if times and (times[0] < state.time or times[-1] > steps):
        raise DomainError(
            f"snapshot_times must lie within [{state.time}, {steps}], got {times}"
        )
    wanted = set(times)
    wanted.add(steps)
    current = state.copy()
    snapshots = []
    if current.time in wanted:
        snapshots.append(current.copy())
    while current.time < steps:
        current = step(current, coin_field)
        if current.time in wanted:
            snapshots.append(current)
    return snapshots
