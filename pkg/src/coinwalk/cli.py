"""Command-line client.

Subcommands mirror the HTTP endpoints: ``validate``, ``simulate``,
``ensemble`` and ``oracle`` build the same request models the service
accepts, then either dispatch them in-process (default) or post them to a
running server given with ``--url``.  ``serve`` starts the server.

Exit codes: 0 success, 2 validation, 3 window overflow, 4 numeric accuracy,
5 I/O, 1 anything else.  Failures print a JSON error object to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .errors import CoinWalkError, OutputError
from .harness.config import (
    ExperimentConfig,
    apply_overrides,
    load_config,
)
from .harness.table import emit
from .service import handlers
from .service.schemas import (
    EnsembleRequest,
    EnsembleResponse,
    ExperimentConfigModel,
    OracleRequest,
    OracleResponse,
    SimulateRequest,
    SimulateResponse,
    ValidateRequest,
    ValidateResponse,
)

EXIT_BY_CATEGORY = {
    "validation": 2,
    "window-overflow": 3,
    "accuracy": 4,
    "numeric": 4,
    "io": 5,
    "internal": 1,
}


class RemoteError(CoinWalkError):
    """Error body returned by a remote server."""

    def __init__(self, category: str, message: str):
        self.category = category
        super().__init__(message)


def _remote_client(url: str):
    import httpx

    return httpx.Client(base_url=url, timeout=None)


def _post(url: str, path: str, payload, response_model):
    with _remote_client(url) as client:
        response = client.post(path, json=payload.model_dump(mode="json"))
    if response.status_code >= 400:
        try:
            body = response.json()
        except ValueError:
            raise RemoteError("internal", response.text) from None
        raise RemoteError(body.get("category", "internal"), body.get("message", response.text))
    return response_model.model_validate(response.json())


def _comma_list(cast):
    def parse(text: str):
        return tuple(cast(item) for item in text.split(",") if item.strip() != "")

    return parse


def _add_config_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-c", "--config", metavar="FILE", help="YAML config file")
    parser.add_argument("--geometry", choices=["line", "ring", "segment"])
    parser.add_argument("--sites", type=int)
    parser.add_argument("--steps", type=int)
    parser.add_argument(
        "--disorder-strengths",
        type=_comma_list(float),
        metavar="W1,W2,...",
        dest="disorder_strengths",
    )
    parser.add_argument("--realizations", type=int)
    parser.add_argument("--master-seed", type=int, dest="master_seed")
    parser.add_argument(
        "--snapshot-times", type=_comma_list(int), metavar="T1,T2,...", dest="snapshot_times"
    )
    parser.add_argument(
        "--observables", type=_comma_list(str), metavar="NAME1,NAME2,..."
    )
    parser.add_argument("--format", choices=["csv", "json"], dest="output_format")
    parser.add_argument("-o", "--output", dest="output_path", metavar="FILE")
    parser.add_argument("--smoothing", type=float, dest="spline_smoothing")
    parser.add_argument("--quad-points", type=int, dest="quad_points")


def _build_config(args: argparse.Namespace) -> ExperimentConfig:
    config = load_config(args.config) if args.config else ExperimentConfig()
    return apply_overrides(
        config,
        geometry=args.geometry,
        sites=args.sites,
        steps=args.steps,
        disorder_strengths=args.disorder_strengths,
        realizations=args.realizations,
        master_seed=args.master_seed,
        snapshot_times=args.snapshot_times,
        observables=args.observables,
        output_format=args.output_format,
        output_path=args.output_path,
        spline_smoothing=args.spline_smoothing,
        quad_points=args.quad_points,
    )


def _write_text(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise OutputError(f"cannot write to {path}: {exc}") from exc


def cmd_validate(args: argparse.Namespace) -> int:
    request = ValidateRequest(config=ExperimentConfigModel.from_config(_build_config(args)))
    if args.url:
        response = _post(args.url, "/validate", request, ValidateResponse)
    else:
        response = handlers.handle_validate(request)
    if response.valid:
        print("configuration OK")
        return 0
    for violation in response.violations:
        print(f"invalid: {violation}")
    return EXIT_BY_CATEGORY["validation"]


def _simulate_csv(response: SimulateResponse) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if response.amplitudes is None:
        writer.writerow(["x", "p"])
        for x, p in zip(response.positions, response.occupation):
            writer.writerow([x, repr(p)])
    else:
        writer.writerow(["x", "re_up", "im_up", "re_down", "im_down", "p"])
        for entry, p in zip(response.amplitudes, response.occupation):
            writer.writerow(
                [
                    entry.x,
                    repr(entry.re_up),
                    repr(entry.im_up),
                    repr(entry.re_down),
                    repr(entry.im_down),
                    repr(p),
                ]
            )
    return buffer.getvalue()


def cmd_simulate(args: argparse.Namespace) -> int:
    config = _build_config(args)
    request = SimulateRequest(
        config=ExperimentConfigModel.from_config(config),
        disorder_index=args.disorder_index,
        realization=args.realization,
        include_amplitudes=not args.no_amplitudes,
    )
    if args.url:
        response = _post(args.url, "/simulate", request, SimulateResponse)
    else:
        response = handlers.handle_simulate(request)
    if config.output_format == "json":
        _write_text(response.model_dump_json(indent=1) + "\n", config.output_path)
    else:
        _write_text(_simulate_csv(response), config.output_path)
    return 0


def cmd_ensemble(args: argparse.Namespace) -> int:
    config = _build_config(args)
    request = EnsembleRequest(config=ExperimentConfigModel.from_config(config))
    if args.url:
        response = _post(args.url, "/ensemble", request, EnsembleResponse)
    else:
        response = handlers.handle_ensemble(request)
    table = handlers.table_from_rows(response.rows)
    if config.output_path:
        emit(table, config.output_format, config.output_path)
    else:
        sys.stdout.write(table.render(config.output_format))
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    request = OracleRequest(times=list(args.times), quad_points=args.quad_points)
    if args.url:
        response = _post(args.url, "/oracle", request, OracleResponse)
    else:
        response = handlers.handle_oracle(request)
    if args.output_format == "json":
        text = response.model_dump_json(indent=1) + "\n"
    else:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["t", "quad_points", "max_abs_diff"])
        for result in response.results:
            writer.writerow([result.time, result.quad_points, repr(result.max_abs_diff)])
        text = buffer.getvalue()
    _write_text(text, args.output_path)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("coinwalk.service.app:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coinwalk",
        description="Coined quantum walks with quenched coin disorder",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a configuration")
    _add_config_arguments(p_validate)
    p_validate.add_argument("--url", help="validate against a running server")
    p_validate.set_defaults(func=cmd_validate)

    p_simulate = sub.add_parser("simulate", help="run a single realization and dump amplitudes")
    _add_config_arguments(p_simulate)
    p_simulate.add_argument("--disorder-index", type=int, default=0, dest="disorder_index")
    p_simulate.add_argument("--realization", type=int, default=0)
    p_simulate.add_argument("--no-amplitudes", action="store_true", dest="no_amplitudes")
    p_simulate.add_argument("--url", help="run on a remote server")
    p_simulate.set_defaults(func=cmd_simulate)

    p_ensemble = sub.add_parser("ensemble", help="run the full disorder-ensemble experiment")
    _add_config_arguments(p_ensemble)
    p_ensemble.add_argument("--url", help="run on a remote server")
    p_ensemble.set_defaults(func=cmd_ensemble)

    p_oracle = sub.add_parser("oracle", help="compare engine against the closed-form solution")
    p_oracle.add_argument(
        "--times", type=_comma_list(int), default=(20, 40, 100), metavar="T1,T2,..."
    )
    p_oracle.add_argument("--quad-points", type=int, dest="quad_points")
    p_oracle.add_argument("--format", choices=["csv", "json"], default="csv", dest="output_format")
    p_oracle.add_argument("-o", "--output", dest="output_path", metavar="FILE")
    p_oracle.add_argument("--url", help="run on a remote server")
    p_oracle.set_defaults(func=cmd_oracle)

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CoinWalkError as exc:
        body = {"category": exc.category, "message": str(exc)}
        print(json.dumps(body), file=sys.stderr)
        return EXIT_BY_CATEGORY.get(exc.category, 1)
    except OSError as exc:
        print(json.dumps({"category": "io", "message": str(exc)}), file=sys.stderr)
        return EXIT_BY_CATEGORY["io"]


if __name__ == "__main__":
    sys.exit(main())
