"""Command-line front end: run, validate, and version.

Exit codes follow the scenario contract: 0 success, 2 for anything the
user can fix in the input (malformed scenario, bad flags, unusable
output directory, plots requested where no artifacts exist), 3 when a
numerical guard refused to stand behind a result mid-run -- stderr and
the partially written report.json both name the guard.

``--threads`` pins the BLAS/OpenMP pool sizes through the standard
environment variables; it must act before numpy is imported, which is
why the heavy imports hide inside the command bodies.
"""

from __future__ import annotations

import argparse
import os
import sys

_THREAD_VARS = (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="causlab",
        description=(
            "Causality diagnostics for electromagnetic transmission "
            "through dispersive slabs."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    runp = sub.add_parser("run", help="execute a scenario file")
    runp.add_argument("scenario", help="path to a scenario file (YAML, schema 1)")
    runp.add_argument(
        "--out",
        metavar="DIR",
        default=None,
        help="output directory (overrides the scenario's own 'output')",
    )
    runp.add_argument(
        "--literal-eq17",
        action="store_true",
        help=(
            "render the spectrum with the textbook transmission expression "
            "(kept for side-by-side comparison; it lacks the vacuum-transit "
            "phase and does not reach 1 at zero thickness)"
        ),
    )
    runp.add_argument(
        "--threads",
        type=int,
        metavar="N",
        default=None,
        help="pin numerical thread pools to N (reproducibility)",
    )
    runp.add_argument(
        "--plots",
        action="store_true",
        help="render SVG plots from the run's artifacts",
    )

    valp = sub.add_parser(
        "validate", help="check a scenario file without computing anything"
    )
    valp.add_argument("scenario", help="path to a scenario file")

    sub.add_parser("version", help="print the package version")
    return parser


def _cmd_version() -> int:
    from . import __version__

    print(__version__)
    return 0


def _cmd_validate(path: str) -> int:
    from .errors import ScenarioValidationError
    from .scenario import load_scenario

    try:
        config = load_scenario(path)
    except ScenarioValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    grid = "explicit" if config.grid is not None else "auto"
    pulse = config.pulse["kind"] if config.pulse else "auto probe"
    print(
        f"[ok] {config.name}: schema 1, units {config.units}, "
        f"model {config.model_echo['kind']}, grid {grid}, pulse {pulse}"
    )
    print(f"[ok] analyses: {', '.join(config.analyses)}")
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    from .errors import MissingArtifactError, ScenarioValidationError
    from .scenario import load_scenario, run_scenario

    try:
        config = load_scenario(args.scenario)
    except ScenarioValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    result = run_scenario(
        config,
        out_dir=args.out,
        literal_eq17=True if args.literal_eq17 else None,
    )
    out = args.out if args.out is not None else (config.output or ".")

    if result.status == 2:
        print(f"error: {result.message}", file=sys.stderr)
        return 2
    if result.status == 3:
        print(f"error: {result.message}", file=sys.stderr)
        print(
            f"[fail] partial report written to {os.path.join(out, 'report.json')}",
            file=sys.stderr,
        )
        return 3

    for name in result.artifacts:
        print(f"[out] {os.path.join(out, name)}")
    causality = result.report.get("results", {}).get("causality")
    if causality is not None:
        print(f"[verdict] {causality['verdict']}")

    if args.plots:
        from .plots import emit_plots

        try:
            rendered = emit_plots(out)
        except MissingArtifactError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        for name in rendered:
            print(f"[out] {name}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "version":
        return _cmd_version()

    threads = getattr(args, "threads", None)
    if threads is not None:
        if threads < 1:
            print("error: --threads must be >= 1", file=sys.stderr)
            return 2
        for var in _THREAD_VARS:
            os.environ[var] = str(threads)

    if args.command == "validate":
        return _cmd_validate(args.scenario)
    return _cmd_run(args)


if __name__ == "__main__":
    sys.exit(main())
