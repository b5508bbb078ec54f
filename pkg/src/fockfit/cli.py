"""
Command-line entry point.

    fockfit analyze paper.csv --format json --verify
    fockfit fit mint.csv --strategy fix-m2=0.3
    fockfit check goldfish.csv --tolerance 1e-6
    fockfit construct classical.json

Dataset names that are not existing paths are looked up in the bundled
fixture directory (``$FOCKFIT_DATA_DIR`` overrides it).

Exit codes: 0 success, 1 I/O or parse failure, 2 invalid configuration.
Infeasible fits or non-classical records never change the exit code.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from .analysis import AnalysisConfig, run_analysis
from .combination import FitStrategy
from .dataset import DatasetError, load_dataset, resolve_path
from .report import FORMATS, emit_report
from .tolerances import CLASSICAL_TOL

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2

log = logging.getLogger("fockfit")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fockfit",
        description="Fock-space membership models for concept combinations.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="CSV or JSON dataset (path or bundled fixture name)")
    common.add_argument("--input-format", choices=("csv", "json"), default=None,
                        help="dataset format (default: from the file suffix)")
    common.add_argument("--format", choices=FORMATS, default="json", help="report format")
    common.add_argument("--tolerance", type=float, default=CLASSICAL_TOL,
                        help=f"classicality tolerance (default {CLASSICAL_TOL:g})")
    common.add_argument("--seed", type=int, default=0, help="seed for the multi-start fits")
    common.add_argument("-o", "--output", type=Path, default=None,
                        help="write the report here instead of stdout")

    fitting = argparse.ArgumentParser(add_help=False)
    fitting.add_argument("--strategy", default="min-interference",
                         help="fix-m2=<v> | max-sector1 | min-interference")
    fitting.add_argument("--starts", type=int, default=8,
                         help="local starts per quadrant for negation fits")

    p = sub.add_parser("analyze", parents=[common, fitting],
                       help="classify, fit and check every record")
    p.add_argument("--verify", action="store_true",
                   help="cross-check results against the brute-force oracles")
    p.add_argument("--grid-resolution", type=int, default=200,
                   help="points per axis for the --verify grid scan")
    sub.add_parser("fit", parents=[common, fitting], help="fit model parameters only")
    sub.add_parser("check", parents=[common], help="deviation classes and classicality only")
    sub.add_parser("construct", parents=[common],
                   help="entangled sector-2 realizations of classical records")
    return parser


def _config_from_args(args) -> AnalysisConfig:
    kwargs = {"mode": args.command, "tolerance": args.tolerance, "seed": args.seed}
    if args.command in ("analyze", "fit"):
        kwargs["strategy"] = FitStrategy.parse(args.strategy)
        kwargs["n_starts"] = args.starts
    if args.command == "analyze":
        kwargs["verify"] = args.verify
        kwargs["grid_resolution"] = args.grid_resolution
    return AnalysisConfig(**kwargs)


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")

    try:
        config = _config_from_args(args)
    except ValueError as exc:
        print(f"fockfit: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        path = resolve_path(args.file)
        ds = load_dataset(path, args.input_format)
    except DatasetError as exc:
        print(f"fockfit: {exc}", file=sys.stderr)
        return EXIT_IO
    except (OSError, UnicodeDecodeError) as exc:
        print(f"fockfit: cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"fockfit: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for issue in ds.rejected:
        print(f"fockfit: {path}: rejected {issue}", file=sys.stderr)

    log.info("analysing %d records from %s", len(ds), path)
    payload = emit_report(run_analysis(ds, config), args.format)
    try:
        if args.output is None:
            sys.stdout.buffer.write(payload)
            sys.stdout.flush()
        else:
            args.output.write_bytes(payload)
    except OSError as exc:
        print(f"fockfit: cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
