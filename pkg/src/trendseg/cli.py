"""Command-line front end: CSV detection and Monte-Carlo simulation.

All user-facing indices are 1-based (a change-point is the last index of
its segment).  Exit codes: 0 success, 2 input/parse error, 3 non-finite
or empty input, 64 bad flags.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from .errors import NonFiniteInput, SeriesTooShort, TrendsegError
from .fixtures import FAMILIES, default_signal
from .pipeline import DetectionOptions, trendsegment
from .simlab import NoiseSpec, run_simulation

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BAD_DATA = 3
EXIT_USAGE = 64

_NOISE_BY_FLAG = {
    "gauss": "gauss_iid",
    "ar1": "ar1",
    "t5": "t5_scaled",
    "laplace": "laplace",
}


class _CsvError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="trendseg",
                     description="Piecewise-linear trend change-point detection")
    sub = parser.add_subparsers(dest="command", required=True)

    det = sub.add_parser("detect", parents=[], help="detect change-points in a CSV column",
                         prog="trendseg detect")
    det.error = parser.error  # type: ignore[method-assign]
    det.add_argument("--input", required=True, help="input CSV path")
    det.add_argument("--column", default="0",
                     help="column name, or 0-based index (default: 0)")
    det.add_argument("--no-header", action="store_true",
                     help="treat the first row as data")
    det.add_argument("--const", type=float, default=1.3,
                     help="threshold constant C (default: 1.3)")
    det.add_argument("--rho", type=float, default=0.04,
                     help="per-pass merge fraction (default: 0.04)")
    det.add_argument("--sigma", type=float, default=None,
                     help="noise level override (default: estimate)")
    det.add_argument("--stage1", action="store_true",
                     help="enable greedy re-merge post-processing")
    det.add_argument("--stage2", action="store_true",
                     help="enable local-detail pruning post-processing")
    det.add_argument("--output", default=None,
                     help="write JSON here instead of stdout")

    sim = sub.add_parser("simulate", help="run a Monte-Carlo experiment",
                         prog="trendseg simulate")
    sim.error = parser.error  # type: ignore[method-assign]
    sim.add_argument("--model", required=True, choices=FAMILIES,
                     help="signal family")
    sim.add_argument("--t", type=int, default=None, help="series length")
    sim.add_argument("--sigma", type=float, default=1.0, help="noise level")
    sim.add_argument("--noise", choices=sorted(_NOISE_BY_FLAG), default="gauss")
    sim.add_argument("--phi", type=float, default=0.3, help="AR(1) coefficient")
    sim.add_argument("--runs", type=int, default=100)
    sim.add_argument("--seed", type=int, default=1)
    sim.add_argument("--const", type=float, default=1.3)
    sim.add_argument("--rho", type=float, default=0.04)
    sim.add_argument("--json", action="store_true", help="emit JSON, not a table")
    sim.add_argument("--timing", action="store_true",
                     help="include mean runtime (breaks byte-for-byte "
                          "reproducibility of the output)")
    sim.add_argument("--threads", type=int, default=None,
                     help="parallel simulation workers "
                          "(default: TRENDSEG_THREADS or 1)")
    return parser


def _read_column(path: str, column: str, has_header: bool) -> list[float]:
    """Parse one numeric CSV column; raises _CsvError naming the bad line."""
    try:
        handle = open(path, newline="")
    except OSError as exc:
        raise _CsvError(f"cannot open {path}: {exc.strerror}") from exc
    with handle:
        reader = csv.reader(handle)
        rows = list(reader)
    line_no = 0
    names: list[str] | None = None
    if has_header:
        while line_no < len(rows) and not rows[line_no]:
            line_no += 1
        if line_no >= len(rows):
            return []
        names = [name.strip() for name in rows[line_no]]
        line_no += 1

    col_idx: int | None = None
    if names is not None and column in names:
        col_idx = names.index(column)
    else:
        try:
            col_idx = int(column)
        except ValueError:
            raise _CsvError(f"column {column!r} not found"
                            + (f" in header {names}" if names else
                               " (no header; use a 0-based index)")) from None
        if col_idx < 0:
            raise _CsvError(f"column index must be >= 0, got {col_idx}")

    values: list[float] = []
    for i in range(line_no, len(rows)):
        row = rows[i]
        if not row:
            continue
        if col_idx >= len(row):
            raise _CsvError(f"line {i + 1}: no column {col_idx} (row has {len(row)} fields)")
        cell = row[col_idx].strip()
        try:
            values.append(float(cell))
        except ValueError:
            raise _CsvError(f"line {i + 1}: {cell!r} is not a number") from None
    return values


def _segment_dict(seg) -> dict:
    return {
        "start": seg.start,
        "end": seg.end,
        "intercept": seg.intercept,
        "slope": seg.slope,
        "is_anomaly": seg.is_anomaly,
    }


def cmd_detect(args) -> int:
    try:
        values = _read_column(args.input, args.column, not args.no_header)
    except _CsvError as exc:
        print(f"trendseg detect: {exc}", file=sys.stderr)
        return EXIT_INPUT
    options = DetectionOptions(
        constant_c=args.const, rho=args.rho, sigma_override=args.sigma,
        enable_stage1=args.stage1, enable_stage2=args.stage2,
    )
    try:
        result = trendsegment(values, options)
    except (NonFiniteInput, SeriesTooShort) as exc:
        print(f"trendseg detect: {exc}", file=sys.stderr)
        return EXIT_BAD_DATA
    except TrendsegError as exc:
        print(f"trendseg detect: {exc}", file=sys.stderr)
        return EXIT_INPUT
    payload = {
        "n_hat": result.n_hat,
        "changepoints": result.changepoints,
        "sigma_hat": result.sigma_hat,
        "lambda": result.lam,
        "segments": [_segment_dict(s) for s in result.segments],
        "fitted": result.fitted.tolist(),
    }
    text = json.dumps(payload, indent=2)
    if args.output:
        with open(args.output, "w") as out:
            out.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_simulate(args, parser) -> int:
    threads = args.threads
    if threads is None:
        threads = int(os.environ.get("TRENDSEG_THREADS", "1"))
    if threads < 1:
        parser.error("--threads must be >= 1")
    try:
        signal = default_signal(args.model, args.t)
    except (KeyError, ValueError) as exc:
        parser.error(str(exc))
    noise = NoiseSpec(kind=_NOISE_BY_FLAG[args.noise], sigma=args.sigma,
                      phi=args.phi, seed=args.seed)
    options = DetectionOptions(constant_c=args.const, rho=args.rho)
    if args.runs < 1:
        parser.error("--runs must be >= 1")
    report = run_simulation(signal, noise, args.runs, options, threads=threads)
    if args.json:
        print(report.to_json(include_timing=args.timing))
    else:
        print(report.to_table(include_timing=args.timing))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "detect":
        return cmd_detect(args)
    return cmd_simulate(args, parser)


if __name__ == "__main__":
    sys.exit(main())
