"""Command line entry points: the feasibility calculator and the
verification pipeline.

Reports are JSON (schema version 1) and byte-identical for identical
(config, seed) pairs; wall-clock timings are only included on request since
they would break that reproducibility.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time

from . import __version__
from .suites import SUITES, min_feasible_level, run_suite

REPORT_VERSION = 1


def _write_report(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        os.unlink(tmp)
        raise


def cmd_feasibility(args) -> int:
    result = min_feasible_level(args.q, args.k)
    report = {
        "version": REPORT_VERSION,
        "command": "feasibility",
        "params": {"q": args.q, "k": args.k},
        "seed": args.seed,
        "results": [{"name": "min-feasible-level", "passed":
                     result["depth_condition_ok"], "details": result}],
        "pass": result["depth_condition_ok"],
        "tool_version": __version__,
    }
    _write_report(report, args.out)
    return 0


def cmd_pipeline(args) -> int:
    start = time.monotonic()
    results = run_suite(args.suite, seed=args.seed)
    elapsed = time.monotonic() - start
    csv_files = None
    if args.csv_dir:
        from .suites import export_spectra_csv

        os.makedirs(args.csv_dir, exist_ok=True)
        csv_files = export_spectra_csv(args.csv_dir)
    report = {
        "version": REPORT_VERSION,
        "command": "pipeline",
        "params": {"suite": args.suite, "q": args.q, "p": args.p, "n": args.n,
                   "k": args.k, "m": args.m, "mode": args.mode,
                   "cap_elements": args.cap_elements,
                   "cap_vertices": args.cap_vertices},
        "seed": args.seed,
        "results": results,
        "pass": all(r["passed"] for r in results),
        "tool_version": __version__,
    }
    if csv_files is not None:
        report["csv_files"] = csv_files
    if args.timings:
        report["timings"] = {"total_seconds": round(elapsed, 3)}
    _write_report(report, args.out)
    if not report["pass"]:
        failing = [r["name"] for r in results if not r["passed"]]
        print(f"failed: {', '.join(failing)}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boxlab",
        description="construct and verify Cayley graphs, covers, spectra, "
                    "and representation data at desk scale")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, default=29)
    common.add_argument("--p", type=int, default=5)
    common.add_argument("--n", type=int, default=1)
    common.add_argument("--k", type=int, default=1)
    common.add_argument("--m", type=int, default=8)
    common.add_argument("--mode", choices=["dense", "extreme"], default="dense")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="report path (default stdout)")
    common.add_argument("--cap-elements", type=int, default=10 ** 7)
    common.add_argument("--cap-vertices", type=int, default=500_000)

    feas = sub.add_parser("feasibility", parents=[common],
                          help="minimal depth for the size condition")
    feas.set_defaults(fn=cmd_feasibility)

    pipe = sub.add_parser("pipeline", parents=[common],
                          help="run a verification bundle")
    pipe.add_argument("--suite", required=True, choices=sorted(SUITES))
    pipe.add_argument("--timings", action="store_true",
                      help="include wall-clock timings in the report")
    pipe.add_argument("--csv-dir", default=None,
                      help="also export eigenvalue CSV files here")
    pipe.set_defaults(fn=cmd_pipeline)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
