"""Deterministic per-realization seed derivation.

Seeds come from numpy's SeedSequence hash: the master seed is the entropy
pool and (disorder index, realization index) form the spawn key.  The
derivation is stateless, so any realization can be reproduced in isolation
and the order in which workers pick up realizations is irrelevant.
"""

from __future__ import annotations

import numpy as np

from ..errors import DomainError


def derive_seed(master_seed: int, disorder_index: int, realization: int) -> int:
    """Stateless 64-bit seed for one (disorder strength, realization) cell."""
    if master_seed < 0 or disorder_index < 0 or realization < 0:
        raise DomainError("seed derivation inputs must be nonnegative integers")
    sequence = np.random.SeedSequence(
        entropy=master_seed, spawn_key=(disorder_index, realization)
    )
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def seed_grid_duplicates(
    master_seed: int, n_disorder: int, n_realizations: int
) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Exhaustively check the full seed grid for collisions.

    Returns the list of colliding (disorder_index, realization) pairs; empty
    means every cell received a distinct seed.
    """
    seen: dict[int, tuple[int, int]] = {}
    duplicates = []
    for w_index in range(n_disorder):
        for i in range(n_realizations):
            seed = derive_seed(master_seed, w_index, i)
            if seed in seen:
                duplicates.append((seen[seed], (w_index, i)))
            else:
                seen[seed] = (w_index, i)
    return duplicates
