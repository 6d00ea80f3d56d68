from __future__ import annotations

import math

import pytest

from coinwalk.engine import evolve, initial_state, sample_coin_field
from coinwalk.errors import ConfigValidationError, DomainError, OutputError
from coinwalk.harness import (
    ExperimentConfig,
    ResultRow,
    ResultTable,
    derive_seed,
    emit,
    run_experiment,
)
from coinwalk.harness.config import (
    apply_overrides,
    config_from_mapping,
    load_config,
    validate_config,
)
from coinwalk.harness.seeds import seed_grid_duplicates
from coinwalk.harness.table import read_table
from coinwalk.observables import ensemble_occupation

TINY = ExperimentConfig(
    geometry="line",
    steps=12,
    disorder_strengths=(0.0, 0.8),
    realizations=6,
    master_seed=9,
    snapshot_times=(6, 12),
    observables=("occupation", "p0", "fidelity", "mixing", "msd", "ee", "negativity"),
)


# -------------------------------------------------------------------- seeds

def test_seed_derivation_is_deterministic_and_injective_in_practice():
    assert derive_seed(0, 0, 0) == derive_seed(0, 0, 0)
    assert derive_seed(0, 0, 0) != derive_seed(0, 0, 1)
    assert derive_seed(0, 0, 0) != derive_seed(0, 1, 0)
    assert derive_seed(1, 0, 0) != derive_seed(0, 0, 0)


def test_full_scale_seed_grid_has_no_collisions():
    assert seed_grid_duplicates(2024, 6, 1000) == []


def test_seed_derivation_rejects_negative_inputs():
    with pytest.raises(DomainError):
        derive_seed(-1, 0, 0)


# -------------------------------------------------------------------- config

def test_defaults_mirror_the_standard_setup():
    config = ExperimentConfig()
    assert config.resolved_sites() == 201
    assert config.realizations == 1000
    assert config.disorder_strengths == (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)
    assert config.resolved_snapshots() == (100,)
    assert validate_config(config) == []


def test_ring_defaults_to_61_sites():
    config = ExperimentConfig(geometry="ring", steps=300)
    assert config.resolved_sites() == 61


def test_validation_collects_every_violation():
    config = ExperimentConfig(
        geometry="spiral",
        steps=0,
        realizations=0,
        disorder_strengths=(2.0,),
        observables=("p0", "bogus"),
        output_format="xml",
    )
    problems = validate_config(config)
    assert len(problems) >= 6
    joined = "\n".join(problems)
    assert "spiral" in joined and "bogus" in joined and "xml" in joined


def test_line_window_must_hold_the_light_cone():
    config = ExperimentConfig(geometry="line", sites=41, steps=100, observables=("p0",))
    problems = validate_config(config)
    assert any("window" in p for p in problems)


def test_sigma_needs_enough_steps():
    config = ExperimentConfig(steps=10, observables=("sigma",))
    assert any("sigma" in p for p in validate_config(config))


def test_snapshot_times_validation():
    config = ExperimentConfig(steps=10, snapshot_times=(4, 2), observables=("p0",))
    assert any("increasing" in p for p in validate_config(config))
    config = ExperimentConfig(steps=10, snapshot_times=(11,), observables=("p0",))
    assert any("outside" in p for p in validate_config(config))


def test_yaml_loading_flattens_sections(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text(
        """
geometry: ring
sites: 61
steps: 25
disorder_strengths: [0.0, 1.0]
realizations: 4
master_seed: 5
observables: [p0, msd]
output:
  format: json
  path: out.json
analysis:
  spline_smoothing: 0.5
  quad_points: 64
"""
    )
    config = load_config(path)
    assert config.geometry == "ring"
    assert config.output_format == "json"
    assert config.output_path == "out.json"
    assert config.spline_smoothing == 0.5
    assert config.quad_points == 64
    assert config.disorder_strengths == (0.0, 1.0)


def test_unknown_config_keys_are_rejected():
    with pytest.raises(ConfigValidationError):
        config_from_mapping({"stepz": 5})


def test_overrides_replace_only_given_fields():
    base = ExperimentConfig(steps=10, observables=("p0",))
    updated = apply_overrides(base, steps=20, realizations=None)
    assert updated.steps == 20
    assert updated.realizations == base.realizations


# --------------------------------------------------------------------- table

def test_empty_table_renders_header_only():
    assert ResultTable([]).to_csv() == "W,t,observable,value,std_error,N\n"


def test_single_row_round_trips_exactly():
    awkward = 0.1 + 0.2  # needs 17 significant digits
    row = ResultRow(0.2, 7, "p0", awkward, 1.0 / 3.0, 12)
    table = ResultTable([row])
    assert ResultTable.from_csv(table.to_csv()) == table
    assert ResultTable.from_json(table.to_json()) == table


def test_emit_and_read_back(tmp_path):
    table = ResultTable([ResultRow(1.0, 3, "msd", 2.5, None, 4)])
    for fmt, name in (("csv", "r.csv"), ("json", "r.json")):
        target = emit(table, fmt, tmp_path / name)
        assert read_table(target) == table


def test_emit_surfaces_io_failures_with_path(tmp_path):
    table = ResultTable([])
    missing_dir = tmp_path / "no" / "such" / "dir" / "out.csv"
    with pytest.raises(OutputError) as err:
        emit(table, "csv", missing_dir)
    assert "out.csv" in str(err.value)


def test_series_accessor_orders_by_time():
    table = ResultTable(
        [
            ResultRow(0.0, 4, "p0", 0.4, None, 1),
            ResultRow(0.0, 2, "p0", 0.2, None, 1),
            ResultRow(0.5, 2, "p0", 0.9, None, 1),
        ]
    )
    times, values, _ = table.series("p0", 0.0)
    assert times == [2, 4] and values == [0.2, 0.4]


# -------------------------------------------------------------------- runner

@pytest.fixture(scope="module")
def tiny_table():
    return run_experiment(TINY)


def test_runner_rejects_invalid_config():
    with pytest.raises(ConfigValidationError):
        run_experiment(ExperimentConfig(steps=0))


def test_runner_emits_one_row_per_cell(tiny_table):
    keys = [(r.disorder_strength, r.time, r.observable) for r in tiny_table.rows]
    assert len(keys) == len(set(keys))
    assert all(math.isfinite(r.value) for r in tiny_table.rows)


def test_line_return_probability_reported_on_even_times_only(tiny_table):
    times, values, _ = tiny_table.series("p0", 0.0)
    assert times == list(range(0, 13, 2))
    assert values[0] == pytest.approx(1.0, abs=1e-12)


def test_ring_reports_return_probability_at_all_times():
    config = ExperimentConfig(
        geometry="ring",
        sites=21,
        steps=8,
        disorder_strengths=(0.5,),
        realizations=3,
        master_seed=1,
        observables=("p0",),
    )
    times, _, _ = run_experiment(config).series("p0", 0.5)
    assert times == list(range(0, 9))


def test_runner_occupation_matches_ensemble_occupation(tiny_table):
    # aggregation must agree with averaging states directly
    geometry = TINY.build_geometry()
    for w_index, w in enumerate(TINY.disorder_strengths):
        states = []
        for i in range(TINY.realizations):
            seed = derive_seed(TINY.master_seed, w_index, i)
            field = sample_coin_field(geometry, w, seed)
            states.append(evolve(initial_state(geometry), field, 12)[-1])
        direct = ensemble_occupation(states)
        for site, x in enumerate(geometry.positions()):
            row = tiny_table.value(f"occupation[{x}]", w, 12)
            assert row.value == pytest.approx(direct.p[site], abs=1e-12)


def test_runner_clean_walk_matches_known_values(tiny_table):
    times, values, _ = tiny_table.series("p0", 0.0)
    by_time = dict(zip(times, values))
    assert by_time[2] == pytest.approx(0.5, abs=1e-12)
    ee_times, ee_values, _ = tiny_table.series("ee", 0.0)
    assert ee_values[0] == pytest.approx(0.0, abs=1e-12)
    _, msd_values, _ = tiny_table.series("msd", 0.0)
    assert msd_values[1] == pytest.approx(1.0, abs=1e-12)
    assert msd_values[2] == pytest.approx(2.0, abs=1e-12)


def test_runner_fidelity_is_one_without_disorder(tiny_table):
    _, values, _ = tiny_table.series("fidelity", 0.0)
    assert all(abs(v - 1.0) < 1e-12 for v in values)


def test_runner_negativity_rows_present_at_snapshots(tiny_table):
    times, values, errors = tiny_table.series("negativity", 0.8)
    assert times == [6, 12]
    assert all(v >= 0.0 for v in values)
    assert errors == [None, None]


def test_runner_standard_errors_vanish_without_disorder(tiny_table):
    # identical realizations: only float cancellation noise remains
    _, _, errors = tiny_table.series("mixing", 0.0)
    assert all(e < 1e-8 for e in errors)
    _, _, errors = tiny_table.series("mixing", 0.8)
    assert any(e > 1e-3 for e in errors)


def test_runner_mixing_matches_reference_implementation(tiny_table):
    from coinwalk.observables import flat_distribution, mixing_ratio, occupation

    geometry = TINY.build_geometry()
    t = 12
    total = 0.0
    for i in range(TINY.realizations):
        seed = derive_seed(TINY.master_seed, 1, i)
        field = sample_coin_field(geometry, 0.8, seed)
        state = evolve(initial_state(geometry), field, t)[-1]
        total += mixing_ratio(occupation(state), flat_distribution(geometry, t))
    row = tiny_table.value("mixing", 0.8, t)
    assert row.value == pytest.approx(total / TINY.realizations, abs=1e-12)


def test_rerun_is_bit_identical(tiny_table):
    assert run_experiment(TINY).to_csv() == tiny_table.to_csv()


def test_output_is_independent_of_worker_count(monkeypatch):
    config = ExperimentConfig(
        geometry="line",
        steps=10,
        disorder_strengths=(0.6,),
        realizations=120,  # three reduction blocks
        master_seed=3,
        observables=("p0", "msd", "ee"),
    )
    monkeypatch.setenv("COINWALK_WORKERS", "1")
    serial = run_experiment(config).to_csv()
    monkeypatch.setenv("COINWALK_WORKERS", "2")
    parallel = run_experiment(config).to_csv()
    assert serial == parallel


def test_bad_worker_override_is_rejected(monkeypatch):
    monkeypatch.setenv("COINWALK_WORKERS", "zero")
    with pytest.raises(ConfigValidationError):
        run_experiment(
            ExperimentConfig(
                steps=5, disorder_strengths=(0.0,), realizations=1, observables=("p0",)
            )
        )


def test_clean_occupation_profile_shows_ballistic_peaks():
    config = ExperimentConfig(
        geometry="line",
        steps=100,
        disorder_strengths=(0.0,),
        realizations=1,
        master_seed=0,
        snapshot_times=(100,),
        observables=("occupation",),
    )
    table = run_experiment(config)
    profile = {}
    for row in table.rows:
        site = int(row.observable[len("occupation[") : -1])
        profile[site] = row.value
    peak_site = max(profile, key=profile.get)
    assert 55 <= abs(peak_site) <= 85  # ballistic front near +-t/sqrt(2)
    assert profile[peak_site] == pytest.approx(profile[-peak_site], abs=1e-10)
    assert profile[0] < profile[peak_site] / 5


def test_sigma_rows_start_at_the_transient_cutoff():
    config = ExperimentConfig(
        geometry="line",
        steps=40,
        disorder_strengths=(0.0,),
        realizations=1,
        master_seed=0,
        observables=("sigma",),
    )
    times, values, _ = run_experiment(config).series("sigma", 0.0)
    assert times == list(range(10, 41))
    assert all(1.5 < v < 2.5 for v in values)  # ballistic regime
