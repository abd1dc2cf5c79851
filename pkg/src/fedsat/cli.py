# SPDX-FileCopyrightText: 2025-present fedsat contributors
#
# SPDX-License-Identifier: MIT
"""
Command-line entry point.

    fedsat run --scenario B --seed 7 --runs 100 --out b.csv
    fedsat sweep --config my.toml --param task_load --values 50,100,150
    fedsat table2 --req-bytes 150 --resp-bytes 100
    fedsat presets

Only CSV goes to stdout (or ``--out``); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any

from fedsat.config import load_scenario_config
from fedsat.config import parse_sweep_values
from fedsat.errors import ConfigError
from fedsat.errors import DomainError
from fedsat.errors import FedsatError
from fedsat.link import LinkConfig
from fedsat.link import access_reports
from fedsat.scenario import PRESET_NAMES
from fedsat.scenario import ScenarioConfig
from fedsat.scenario import Sweep
from fedsat.scenario import SweepResult
from fedsat.scenario import emit_csv
from fedsat.scenario import emit_presets_csv
from fedsat.scenario import emit_type_csv
from fedsat.scenario import preset_sweeps
from fedsat.scenario import run_scenario

__all__ = ["SEED_ENV", "execute_command", "main"]

logger = logging.getLogger(__name__)

SEED_ENV = "FEDSAT_SEED"
EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2
_HANDLER_NAME = "fedsat-cli"


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, help=f"master seed (overridden by ${SEED_ENV})")
    parser.add_argument("--runs", type=int, help="Monte Carlo runs per sweep point")
    parser.add_argument("--workers", type=int, help="worker processes (default 1)")
    parser.add_argument("--out", type=Path, help="write the CSV here instead of stdout")
    parser.add_argument("--types-out", type=Path, help="also write per-type success CSV here")


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fedsat",
        description="Federation of virtualized CubeSat constellations: Monte Carlo simulator.",
    )
    parser.add_argument("--verbose", action="store_true", help="log debug output to stderr")
    verbs = parser.add_subparsers(dest="verb", required=True, metavar="{run,sweep,table2,presets}")

    run = verbs.add_parser("run", help="run a preset scenario")
    run.add_argument("--scenario", required=True, choices=PRESET_NAMES, type=str.upper)
    _add_run_options(run)

    sweep = verbs.add_parser("sweep", help="sweep one parameter of a scenario file")
    sweep.add_argument("--config", required=True, type=Path, help="TOML scenario file")
    sweep.add_argument("--param", required=True)
    sweep.add_argument("--values", required=True, help="comma-separated values")
    _add_run_options(sweep)

    table2 = verbs.add_parser("table2", help="access time and registration load per altitude")
    table2.add_argument("--req-bytes", type=int, default=LinkConfig.reg_request_bytes)
    table2.add_argument("--resp-bytes", type=int, default=LinkConfig.reg_response_bytes)
    table2.add_argument("--out", type=Path)

    presets = verbs.add_parser("presets", help="list the preset scenario definitions")
    presets.add_argument("--out", type=Path)
    return parser


def _configure_logging(verbose: bool) -> None:  # noqa: FBT001
    package_logger = logging.getLogger("fedsat")
    for handler in list(package_logger.handlers):
        if handler.get_name() == _HANDLER_NAME:
            package_logger.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.set_name(_HANDLER_NAME)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    package_logger.addHandler(handler)
    package_logger.setLevel(logging.DEBUG if verbose else logging.WARNING)


def _seed(args: argparse.Namespace) -> int | None:
    override = os.environ.get(SEED_ENV)
    if override is None:
        return args.seed  # type: ignore[no-any-return]
    try:
        return int(override)
    except ValueError:
        raise ConfigError(f"Expected value of type `int`, got `{override}`", key=SEED_ENV) from None


def _overrides(cfg: ScenarioConfig, args: argparse.Namespace) -> ScenarioConfig:
    changes: dict[str, Any] = {
        "master_seed": _seed(args),
        "runs": args.runs,
        "workers": args.workers,
    }
    return replace(cfg, **{key: value for key, value in changes.items() if value is not None})


def _write(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    out.write_text(text, encoding="utf-8", newline="")


def _emit(results: list[SweepResult], args: argparse.Namespace) -> None:
    _write(emit_csv(results), args.out)
    if args.types_out is not None:
        _write(emit_type_csv(results), args.types_out)


def _run(args: argparse.Namespace) -> None:
    results: list[SweepResult] = []
    for base, sweep in preset_sweeps(args.scenario):
        results.extend(run_scenario(_overrides(base, args), sweep))
    _emit(results, args)


def _sweep(args: argparse.Namespace) -> None:
    cfg = _overrides(load_scenario_config(args.config), args)
    sweep = Sweep(args.param, parse_sweep_values(args.param, args.values))
    _emit(run_scenario(cfg, sweep), args)


def _table2(args: argparse.Namespace) -> None:
    try:
        link = LinkConfig(reg_request_bytes=args.req_bytes, reg_response_bytes=args.resp_bytes)
    except DomainError as error:
        raise ConfigError(str(error), key=error.name) from error
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(("altitude_km", "access_s", "reg_load_pct", "dl_mbytes", "ul_kbytes"))
    for report in access_reports(link):
        writer.writerow(
            (
                f"{report.altitude:g}",
                f"{report.access_time:.4f}",
                f"{report.registration_load:.4f}",
                f"{report.deliverable_dl / 1e6:.4f}",
                f"{report.deliverable_ul / 1e3:.4f}",
            )
        )
    _write(buffer.getvalue(), args.out)


def _presets(args: argparse.Namespace) -> None:
    _write(emit_presets_csv(), args.out)


def execute_command(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return exit_.code if isinstance(exit_.code, int) else EXIT_USAGE

    _configure_logging(args.verbose)
    handlers = {"run": _run, "sweep": _sweep, "table2": _table2, "presets": _presets}
    try:
        handlers[args.verb](args)
    except ConfigError as error:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"fedsat: error: {error}\n")
        return EXIT_USAGE
    except FedsatError as error:
        sys.stderr.write(f"fedsat: error: {error}\n")
        return EXIT_RUNTIME
    except Exception:
        logger.exception("Unexpected failure while running `%s`", args.verb)
        return EXIT_RUNTIME
    return EXIT_OK


def main() -> None:
    sys.exit(execute_command())
