from __future__ import annotations

import numpy as np
import pytest

from coinwalk.engine import Geometry, GeometryKind, WalkState


def random_pure_state(geometry: Geometry, seed: int) -> WalkState:
    """Normalized random complex state, for property checks."""
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=(geometry.sites, 2)) + 1j * rng.normal(size=(geometry.sites, 2))
    amps /= np.sqrt((np.abs(amps) ** 2).sum())
    return WalkState(geometry, amps.astype(np.complex128), 0)


@pytest.fixture
def line_geometry() -> Geometry:
    return Geometry(GeometryKind.LINE, 21)


@pytest.fixture
def ring_geometry() -> Geometry:
    return Geometry(GeometryKind.RING, 61)


@pytest.fixture
def segment_geometry() -> Geometry:
    return Geometry(GeometryKind.SEGMENT, 61)
