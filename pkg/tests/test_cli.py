from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

import coinwalk.cli as cli
from coinwalk.harness.table import read_table
from coinwalk.service.app import app


def run_cli(*argv: str) -> int:
    return cli.main(list(argv))


def test_validate_ok(capsys):
    rc = run_cli("validate", "--steps", "10", "--realizations", "2", "--observables", "p0")
    assert rc == 0
    assert "configuration OK" in capsys.readouterr().out


def test_validate_reports_violations_with_exit_code(capsys):
    rc = run_cli("validate", "--steps", "0")
    out = capsys.readouterr().out
    assert rc == 2
    assert "invalid:" in out


def test_ensemble_writes_csv(tmp_path, capsys):
    out = tmp_path / "results.csv"
    rc = run_cli(
        "ensemble",
        "--steps", "6",
        "--realizations", "2",
        "--disorder-strengths", "0.0,1.0",
        "--observables", "p0,msd",
        "--master-seed", "4",
        "-o", str(out),
    )
    assert rc == 0
    table = read_table(out)
    times, values, _ = table.series("p0", 0.0)
    assert values[0] == pytest.approx(1.0, abs=1e-12)


def test_ensemble_prints_to_stdout_by_default(capsys):
    rc = run_cli(
        "ensemble",
        "--steps", "4",
        "--realizations", "1",
        "--disorder-strengths", "0.5",
        "--observables", "msd",
        "--master-seed", "1",
    )
    out = capsys.readouterr().out
    assert rc == 0
    assert out.startswith("W,t,observable,value,std_error,N\n")
    assert len(out.splitlines()) == 6  # header + t = 0..4


def test_config_file_with_flag_override(tmp_path, capsys):
    config = tmp_path / "config.yaml"
    config.write_text(
        "steps: 4\nrealizations: 1\ndisorder_strengths: [0.3]\n"
        "observables: [p0]\nmaster_seed: 2\n"
    )
    rc = run_cli("ensemble", "-c", str(config), "--observables", "msd")
    out = capsys.readouterr().out
    assert rc == 0
    assert ",msd," in out and ",p0," not in out


def test_simulate_dumps_amplitudes(tmp_path):
    out = tmp_path / "state.csv"
    rc = run_cli(
        "simulate",
        "--steps", "3",
        "--realizations", "1",
        "--disorder-strengths", "0.5",
        "--observables", "p0",
        "--master-seed", "1",
        "-o", str(out),
    )
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x,re_up,im_up,re_down,im_down,p"
    assert len(lines) == 8  # header + 7 sites


def test_simulate_json_format(capsys):
    rc = run_cli(
        "simulate",
        "--steps", "2",
        "--realizations", "1",
        "--disorder-strengths", "0.0",
        "--observables", "p0",
        "--format", "json",
    )
    out = capsys.readouterr().out
    assert rc == 0
    body = json.loads(out)
    assert abs(body["norm"] - 1.0) < 1e-12


def test_oracle_subcommand(capsys):
    rc = run_cli("oracle", "--times", "5,10")
    out = capsys.readouterr().out.splitlines()
    assert rc == 0
    assert out[0] == "t,quad_points,max_abs_diff"
    assert float(out[1].split(",")[2]) < 1e-8


def test_validation_failure_exits_with_json_error(capsys):
    rc = run_cli("ensemble", "--steps", "0")
    captured = capsys.readouterr()
    assert rc == 2
    body = json.loads(captured.err)
    assert body["category"] == "validation"


def test_io_failure_exits_with_io_category(tmp_path, capsys):
    rc = run_cli(
        "ensemble",
        "--steps", "4",
        "--realizations", "1",
        "--disorder-strengths", "0.5",
        "--observables", "p0",
        "-o", str(tmp_path / "missing" / "dir" / "out.csv"),
    )
    captured = capsys.readouterr()
    assert rc == 5
    assert json.loads(captured.err)["category"] == "io"


# ----------------------------------------------------------------- remote mode

@pytest.fixture
def remote(monkeypatch):
    monkeypatch.setattr(cli, "_remote_client", lambda url: TestClient(app))


def test_remote_oracle(remote, capsys):
    rc = run_cli("oracle", "--times", "5", "--url", "http://server")
    out = capsys.readouterr().out.splitlines()
    assert rc == 0
    assert float(out[1].split(",")[2]) < 1e-8


def test_remote_ensemble_matches_local(remote, capsys):
    argv = [
        "ensemble",
        "--steps", "5",
        "--realizations", "2",
        "--disorder-strengths", "0.4",
        "--observables", "p0,msd",
        "--master-seed", "6",
    ]
    rc = run_cli(*argv, "--url", "http://server")
    remote_out = capsys.readouterr().out
    assert rc == 0
    rc = run_cli(*argv)
    local_out = capsys.readouterr().out
    assert rc == 0
    assert remote_out == local_out


def test_remote_error_propagates_category_and_exit_code(remote, capsys):
    rc = run_cli(
        "simulate",
        "--steps", "5",
        "--disorder-strengths", "0.5",
        "--disorder-index", "3",
        "--url", "http://server",
    )
    captured = capsys.readouterr()
    assert rc == 2
    assert json.loads(captured.err)["category"] == "validation"
