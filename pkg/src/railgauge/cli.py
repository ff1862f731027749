"""Command line interface.

Usage::

    railgauge build-unitary --kind gm --n 8 --format text
    railgauge measure --kind gm --n 8
    railgauge measure --kind gm --n 4 --signs=-+-
    railgauge sweep --kinds qft,gm --n 2..8 --format csv -o qft_sweep.csv
    railgauge coherent --n 4 --alpha 0.3333333333333333
    railgauge verify --scope unitaries

Exit codes: 0 success, 2 a consistency check failed, 3 invalid configuration
or command line. A sign string may start with a dash: ``--signs ---`` and
``--signs=---`` are the same.
"""

from __future__ import annotations

import argparse
from argparse import SUPPRESS
from enum import Enum
import json
from pathlib import Path
import sys
from typing import Any
from typing import Callable
from typing import NoReturn
from typing import Optional
from typing import Sequence

from . import __version__
from . import config as config_module
from . import export
from . import progress
from .coherent import CoherentConfig
from .coherent import coherent_record
from .config import RunConfig
from .exceptions import RailgaugeError
from .fock import Backend
from .measurement import MeasurementReport
from .measurement import run_measurement
from .measurement import run_sweep
from .unitaries import build
from .verification import CheckOutcome
from .verification import format_table
from .verification import run_verification

EXIT_OK = 0
EXIT_CHECK_FAILED = 2
EXIT_INVALID = 3

PROGRESS_EVENTS = (
    "measurement.started",
    "measurement.evolved",
    "measurement.finished",
    "sweep.skipped",
    "sweep.report",
    "verify.check",
    "coherent.result",
)


def _write(text: str, config: RunConfig) -> None:
    if config.output_path:
        Path(config.output_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _backend(config: RunConfig) -> Optional[Backend]:
    return Backend(config.backend) if config.backend else None


def cmd_build_unitary(config: RunConfig) -> int:
    U = build(config.kind, config.n)
    if config.output_format == "json":
        _write(export.to_json(export.unitary_as_dict(U)), config)
    elif config.output_format == "csv":
        _write(export.unitary_csv(U), config)
    else:
        _write(export.unitary_text(U), config)
    return EXIT_OK


def cmd_measure(config: RunConfig) -> int:
    report = run_measurement(
        build(config.kind, config.n),
        config.phi,
        config.signs,
        backend=_backend(config),
        tol=config.tol,
        prior_plus=config.prior_plus,
        keep_patterns=config.patterns,
        max_workers=config.workers(),
    )
    if config.output_format == "json":
        _write(export.to_json(export.report_as_dict(report)), config)
    elif config.output_format == "csv":
        if config.patterns and report.patterns is not None:
            _write(export.probability_table_csv(report.patterns), config)
        else:
            _write(export.report_csv(report), config)
    else:
        _write(export.report_text(report), config)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_sweep(config: RunConfig) -> int:
    reports = run_sweep(
        config.kinds,
        config.n_range,
        config.phi,
        backend=_backend(config),
        prior_plus=config.prior_plus,
        max_workers=config.workers(),
    )
    if config.output_format == "json":
        _write(export.to_json([export.report_as_dict(r) for r in reports]), config)
    else:
        _write(export.sweep_csv(reports), config)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED


def cmd_coherent(config: RunConfig) -> int:
    record = coherent_record(
        CoherentConfig(
            alpha=config.alpha,
            n=config.n,
            cutoff=config.cutoff,
            upsilon=config.upsilon,
            xi=config.xi,
            method=config.method,
        )
    )
    if config.output_format == "csv":
        _write(export.coherent_csv([record]), config)
    else:
        _write(export.to_json(record), config)
    return EXIT_OK


def _outcome_row(outcome: CheckOutcome) -> dict[str, Any]:
    return {
        "scope": outcome.scope,
        "name": outcome.name,
        "expected": outcome.expected,
        "got": outcome.got,
        "pass": outcome.passed,
    }


def cmd_verify(config: RunConfig) -> int:
    outcomes = run_verification(config.scope, config.extended, config.workers())
    if config.output_format == "json":
        _write(export.to_json([_outcome_row(o) for o in outcomes]), config)
    else:
        _write(format_table(outcomes), config)
    return EXIT_OK if all(o.passed for o in outcomes) else EXIT_CHECK_FAILED


COMMANDS: dict[str, Callable[[RunConfig], int]] = {
    "build-unitary": cmd_build_unitary,
    "measure": cmd_measure,
    "sweep": cmd_sweep,
    "coherent": cmd_coherent,
    "verify": cmd_verify,
}

# Defaults that differ from RunConfig's, applied below the config file.
COMMAND_DEFAULTS: dict[str, dict[str, Any]] = {
    "sweep": {"output_format": "csv"},
    "coherent": {"n": 2},
    "verify": {"output_format": "text"},
}


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with ``EXIT_INVALID``, like a rejected configuration."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


# Options whose value may itself start with a dash.
DASH_VALUED = ("--signs",)


def join_dash_values(argv: Sequence[str]) -> list[str]:
    """Rewrite ``--signs ---`` as ``--signs=---`` before parsing."""
    joined: list[str] = []
    tokens = iter(argv)
    for token in tokens:
        if token in DASH_VALUED:
            value = next(tokens, None)
            joined.append(token if value is None else f"{token}={value}")
        else:
            joined.append(token)
    return joined


def _common_options() -> argparse.ArgumentParser:
    common = ArgumentParser(add_help=False, argument_default=SUPPRESS)
    common.add_argument(
        "--config", dest="config_path", help="flat key = value config file"
    )
    common.add_argument(
        "--threads",
        type=int,
        help=f"worker threads (default: ${config_module.ENV_THREADS} or 4)",
    )
    common.add_argument(
        "--progress",
        action="store_const",
        const=True,
        help="print progress events to stderr",
    )
    common.add_argument(
        "--format",
        "-f",
        dest="output_format",
        choices=config_module.OUTPUT_FORMATS,
    )
    common.add_argument(
        "--output", "-o", dest="output_path", help="write to a file, not stdout"
    )
    return common


def _interferometer_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--kind", choices=config_module.KINDS)
    parser.add_argument("--n", type=int, help="number of modes")


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = ArgumentParser(
        prog="railgauge",
        description="X-basis measurement of single-rail qubits with linear optics",
        argument_default=SUPPRESS,
        parents=[common],
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def command(name: str, summary: str) -> argparse.ArgumentParser:
        return subparsers.add_parser(
            name, help=summary, parents=[common], argument_default=SUPPRESS
        )

    build_p = command("build-unitary", "print an interferometer")
    _interferometer_options(build_p)

    measure_p = command("measure", "success and failure rates of one interferometer")
    _interferometer_options(measure_p)
    measure_p.add_argument("--phi", type=float, help="azimuth of the inputs, radians")
    measure_p.add_argument(
        "--signs",
        help="ancilla signs for modes 2..n, e.g. +-+ or --signs=---",
    )
    measure_p.add_argument("--backend", choices=config_module.BACKENDS)
    measure_p.add_argument("--tol", type=float, help="classification tolerance")
    measure_p.add_argument("--prior-plus", dest="prior_plus", help="e.g. 1/2")
    measure_p.add_argument(
        "--patterns",
        action="store_const",
        const=True,
        help="include the per-pattern probability table",
    )

    sweep_p = command("sweep", "overall success rates over a range of n")
    sweep_p.add_argument("--kinds", help="comma separated kinds, e.g. qft,gm")
    sweep_p.add_argument("--n", dest="n_range", help="range such as 2..8 or 2,4,8")
    sweep_p.add_argument("--phi", type=float)
    sweep_p.add_argument("--backend", choices=config_module.BACKENDS)
    sweep_p.add_argument("--prior-plus", dest="prior_plus")

    coherent_p = command("coherent", "coherent-state ancillas")
    coherent_p.add_argument("--n", type=int)
    coherent_p.add_argument("--alpha", type=float)
    coherent_p.add_argument("--cutoff", type=int)
    coherent_p.add_argument("--method", choices=config_module.METHODS)
    coherent_p.add_argument("--upsilon", type=complex, help="amplitude of |0>")
    coherent_p.add_argument("--xi", type=complex, help="amplitude of |1>")

    verify_p = command("verify", "run the self-checks")
    verify_p.add_argument("--scope", choices=config_module.SCOPES)
    verify_p.add_argument(
        "--extended", action="store_const", const=True, help="add QFT n = 9, 10"
    )
    return parser


def _describe(value: Any) -> str:
    if isinstance(value, MeasurementReport):
        overall = export.decimal(value.overall)
        return f"{value.kind.value} n={value.n} overall={overall}"
    if isinstance(value, CheckOutcome):
        return f"{value.name}: {'PASS' if value.passed else 'FAIL'}"
    if isinstance(value, dict):
        return json.dumps(value, sort_keys=True, default=str)
    if isinstance(value, Enum):
        return str(value.value)
    return str(value)


def _attach_progress_printer() -> None:
    root = progress.get_emitter()

    def printer(event: str) -> Callable[..., None]:
        def listener(*args: Any) -> None:
            shown = ", ".join(_describe(a) for a in args)
            print(f"[{event}] {shown}", file=sys.stderr)

        return listener

    for event in PROGRESS_EVENTS:
        root.add_listener(event, printer(event))


def main(argv: Optional[Sequence[str]] = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    flags = vars(build_parser().parse_args(join_dash_values(argv)))
    command = flags["command"]
    defaults = RunConfig(command=command).replace(**COMMAND_DEFAULTS.get(command, {}))
    try:
        config = config_module.load(flags, defaults)
        if config.progress:
            _attach_progress_printer()
        return COMMANDS[config.command](config)
    except RailgaugeError as exc:
        print(f"railgauge: {exc}", file=sys.stderr)
        return EXIT_INVALID
