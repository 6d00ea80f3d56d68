"""Deterministic parallel execution of disorder ensembles.

Realizations are grouped into fixed-size blocks.  Each block accumulates its
partial sums sequentially in realization order; the parent then reduces the
blocks in block order.  The summation order is therefore identical no matter
how many workers execute the blocks, which makes the emitted table
byte-identical across reruns and pool sizes.

Worker count comes from the COINWALK_WORKERS environment variable when set,
otherwise from the CPU count.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import multiprocessing

import numpy as np

from ..engine import Geometry, GeometryKind, WalkState, initial_state, sample_coin_field, step
from ..entanglement import (
    EnsembleDensity,
    entanglement_entropy,
    negativity,
    reduced_coin_density,
)
from ..errors import ConfigValidationError
from ..observables import MsdSeries, growth_exponent
from .config import ExperimentConfig, ensure_valid
from .seeds import derive_seed
from .table import ResultRow, ResultTable

# Realizations per reduction block.  Fixed so that the floating-point
# summation order, and hence the output bytes, never depend on the pool size.
BLOCK_SIZE = 50

WORKERS_ENV = "COINWALK_WORKERS"

# Emission order of observable row groups.
_ROW_ORDER = ("occupation", "p0", "fidelity", "mixing", "msd", "sigma", "ee", "negativity")

# Spreading exponents are reported from this time on; earlier derivatives are
# dominated by the initial transient.
SIGMA_MIN_TIME = 10

_SCALAR_NAMES = ("p0", "msd", "mixing", "ee", "fidelity")


@dataclass(frozen=True)
class _BlockTask:
    config: ExperimentConfig
    w_index: int
    start: int
    stop: int


def _scalar_selection(config: ExperimentConfig) -> tuple[str, ...]:
    selected = set(config.observables)
    if "sigma" in selected:
        selected.add("msd")
    return tuple(name for name in _SCALAR_NAMES if name in selected)


def _clean_reference_flat(geometry: Geometry, steps: int) -> np.ndarray:
    """Flattened clean-walk states for every time 0..steps (fidelity reference)."""
    coin_field = sample_coin_field(geometry, 0.0, seed=0)
    reference = np.empty((steps + 1, 2 * geometry.sites), dtype=np.complex128)
    state = initial_state(geometry)
    reference[0] = state.flatten()
    for t in range(1, steps + 1):
        state = step(state, coin_field)
        reference[t] = state.flatten()
    return reference


def _line_mixing(p: np.ndarray, origin: int, t: int) -> float:
    # Outside the light cone and on parity-forbidden sites both p and the
    # flat reference vanish exactly, so only the cone slice contributes.
    if t == 0:
        return float(abs(p[origin] - 1.0))
    cone = p[origin - t : origin + t + 1 : 2]
    return float(np.abs(cone - 1.0 / (t + 1)).sum())


def _run_block(task: _BlockTask) -> dict:
    config = task.config
    geometry = config.build_geometry()
    steps = config.steps
    origin = geometry.origin
    x_sq = geometry.positions().astype(float) ** 2
    is_line = geometry.kind is GeometryKind.LINE
    w = config.disorder_strengths[task.w_index]

    scalars = _scalar_selection(config)
    snapshots = config.resolved_snapshots()
    snap_index = {t: j for j, t in enumerate(snapshots)}
    want_occ = "occupation" in config.observables
    want_rho = "negativity" in config.observables

    reference = _clean_reference_flat(geometry, steps) if "fidelity" in scalars else None

    scalar_sum = {name: np.zeros(steps + 1) for name in scalars}
    scalar_sq = {name: np.zeros(steps + 1) for name in scalars}
    occ_sum = np.zeros((len(snapshots), geometry.sites)) if want_occ else None
    occ_sq = np.zeros((len(snapshots), geometry.sites)) if want_occ else None
    rho_sum = (
        np.zeros((len(snapshots), 2 * geometry.sites, 2 * geometry.sites), dtype=np.complex128)
        if want_rho
        else None
    )

    def record(state: WalkState) -> None:
        t = state.time
        p = (np.abs(state.amplitudes) ** 2).sum(axis=1)
        for name in scalars:
            if name == "p0":
                value = float(p[origin])
            elif name == "msd":
                value = float(p @ x_sq)
            elif name == "mixing":
                if is_line:
                    value = _line_mixing(p, origin, t)
                else:
                    value = float(np.abs(p - 1.0 / geometry.sites).sum())
            elif name == "ee":
                value = entanglement_entropy(reduced_coin_density(state))
            else:
                value = float(np.abs(np.vdot(reference[t], state.flatten())) ** 2)
            scalar_sum[name][t] += value
            scalar_sq[name][t] += value * value
        j = snap_index.get(t)
        if j is not None:
            if want_occ:
                occ_sum[j] += p
                occ_sq[j] += p * p
            if want_rho:
                psi = state.flatten()
                rho_sum[j] += psi[:, None] * psi.conj()[None, :]

    for i in range(task.start, task.stop):
        seed = derive_seed(config.master_seed, task.w_index, i)
        coin_field = sample_coin_field(geometry, w, seed)
        state = initial_state(geometry)
        record(state)
        for _ in range(steps):
            state = step(state, coin_field)
            record(state)

    return {
        "scalar_sum": scalar_sum,
        "scalar_sq": scalar_sq,
        "occ_sum": occ_sum,
        "occ_sq": occ_sq,
        "rho_sum": rho_sum,
    }


def _resolve_workers(n_blocks: int) -> int:
    env = os.environ.get(WORKERS_ENV)
    if env is not None:
        try:
            workers = int(env)
        except ValueError:
            raise ConfigValidationError(
                [f"{WORKERS_ENV} must be a positive integer, got {env!r}"]
            ) from None
        if workers < 1:
            raise ConfigValidationError(
                [f"{WORKERS_ENV} must be a positive integer, got {env!r}"]
            )
    else:
        workers = os.cpu_count() or 1
    return min(workers, n_blocks)


def _map_blocks(tasks: list[_BlockTask]) -> list[dict]:
    workers = _resolve_workers(len(tasks))
    if workers <= 1:
        return [_run_block(task) for task in tasks]
    context = multiprocessing.get_context("spawn")
    with ProcessPoolExecutor(max_workers=workers, mp_context=context) as pool:
        return list(pool.map(_run_block, tasks))


def _reduce_blocks(blocks: list[dict]) -> dict:
    total = blocks[0]
    for block in blocks[1:]:
        for name, arr in block["scalar_sum"].items():
            total["scalar_sum"][name] += arr
        for name, arr in block["scalar_sq"].items():
            total["scalar_sq"][name] += arr
        for key in ("occ_sum", "occ_sq", "rho_sum"):
            if total[key] is not None:
                total[key] += block[key]
    return total


def _std_error(sum_: float, sq_sum: float, n: int) -> float | None:
    if n < 2:
        return None
    mean = sum_ / n
    variance = max(sq_sum - n * mean * mean, 0.0) / (n - 1)
    return float(np.sqrt(variance / n))


def run_experiment(config: ExperimentConfig) -> ResultTable:
    """Run the configured ensemble for every disorder strength.

    Returns the long-format table with one row per (W, t, observable);
    occupation profiles are tagged per site.  Output is reproducible
    bit-for-bit for a fixed config, independent of the worker count.
    """
    ensure_valid(config)
    geometry = config.build_geometry()
    n = config.realizations
    steps = config.steps
    snapshots = config.resolved_snapshots()
    positions = geometry.positions()
    rows: list[ResultRow] = []

    for w_index, w in enumerate(config.disorder_strengths):
        tasks = [
            _BlockTask(config, w_index, start, min(start + BLOCK_SIZE, n))
            for start in range(0, n, BLOCK_SIZE)
        ]
        total = _reduce_blocks(_map_blocks(tasks))
        rows.extend(
            _rows_for_strength(config, geometry, w, total, n, steps, snapshots, positions)
        )
    return ResultTable(rows)


def _rows_for_strength(
    config: ExperimentConfig,
    geometry: Geometry,
    w: float,
    total: dict,
    n: int,
    steps: int,
    snapshots: tuple[int, ...],
    positions: np.ndarray,
) -> list[ResultRow]:
    selected = set(config.observables)
    scalar_sum = total["scalar_sum"]
    scalar_sq = total["scalar_sq"]
    rows: list[ResultRow] = []

    for observable in _ROW_ORDER:
        if observable not in selected:
            continue
        if observable == "occupation":
            for j, t in enumerate(snapshots):
                for site, x in enumerate(positions):
                    rows.append(
                        ResultRow(
                            w,
                            t,
                            f"occupation[{x}]",
                            total["occ_sum"][j][site] / n,
                            _std_error(total["occ_sum"][j][site], total["occ_sq"][j][site], n),
                            n,
                        )
                    )
        elif observable == "sigma":
            times = np.arange(SIGMA_MIN_TIME, steps + 1)
            mean_msd = scalar_sum["msd"][SIGMA_MIN_TIME:] / n
            series = MsdSeries(times, mean_msd, w)
            for t, sigma in growth_exponent(series, config.spline_smoothing):
                rows.append(ResultRow(w, int(t), "sigma", float(sigma), None, n))
        elif observable == "negativity":
            for j, t in enumerate(snapshots):
                ens = EnsembleDensity(geometry, t, n, total["rho_sum"][j] / n)
                rows.append(ResultRow(w, t, "negativity", negativity(ens), None, n))
        else:
            times = range(0, steps + 1)
            if observable == "p0" and geometry.kind is GeometryKind.LINE:
                # Odd-time return probabilities vanish identically on the line.
                times = range(0, steps + 1, 2)
            for t in times:
                rows.append(
                    ResultRow(
                        w,
                        t,
                        observable,
                        scalar_sum[observable][t] / n,
                        _std_error(scalar_sum[observable][t], scalar_sq[observable][t], n),
                        n,
                    )
                )
    return rows
