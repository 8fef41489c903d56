"""
Command line entry point.

    qapprox run <config.json> [--no-export] [--fresh]
    qapprox export <report.json> --format table|curves [--out DIR]
    qapprox verify <report.json>

The worker pool size comes from ``QAPPROX_WORKERS`` (default 1).  ``run``
exits 0 only when every cell of the sweep succeeded.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import ConfigError, ExperimentConfig
from .export import FORMATS, ReportMismatch, export
from .runner import REPORT_FILE, WORKERS_ENV, BenchmarkReport, run_experiment, verify_report

EXIT_OK = 0
EXIT_FAILED_CELLS = 1
EXIT_USAGE = 2


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qapprox", description="Single-qubit approximant benchmarks.")
    p.add_argument("-v", "--verbose", action="store_true", help="log every finished cell")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a sweep from a JSON config")
    run.add_argument("config", type=Path)
    run.add_argument("--no-export", action="store_true", help="skip writing tables and curves")
    run.add_argument("--fresh", action="store_true", help="ignore cell results from earlier runs")
    run.add_argument("--workers", type=int, default=None, help=f"overrides ${WORKERS_ENV}")

    exp = sub.add_parser("export", help="write CSV tables or fit curves for a report")
    exp.add_argument("report", type=Path)
    exp.add_argument("--format", choices=FORMATS, required=True)
    exp.add_argument("--out", type=Path, default=None, help="output directory (default: next to the report)")

    ver = sub.add_parser("verify", help="re-evaluate stored parameters of a report")
    ver.add_argument("report", type=Path)
    return p


def _cmd_run(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    report = run_experiment(cfg, workers=args.workers, resume=not args.fresh)
    out = Path(cfg.output_dir)
    n_failed = sum(r["status"] != "ok" for r in report.records)
    print(f"{len(report.records)} cells, {n_failed} failed; report at {out / REPORT_FILE}")
    if not args.no_export:
        for fmt in FORMATS:
            export(report, fmt, out)
    return EXIT_OK if report.ok else EXIT_FAILED_CELLS


def _cmd_export(args) -> int:
    report = BenchmarkReport.load(args.report)
    out = args.out if args.out is not None else args.report.parent
    files = export(report, args.format, out)
    print(f"wrote {len(files)} files under {out}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    report = BenchmarkReport.load(args.report)
    problems = verify_report(report)
    for p in problems:
        print(p)
    print(f"{len(report.records)} records checked, {len(problems)} problems")
    return EXIT_OK if not problems else EXIT_FAILED_CELLS


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    handlers = {"run": _cmd_run, "export": _cmd_export, "verify": _cmd_verify}
    try:
        return handlers[args.command](args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ReportMismatch, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED_CELLS


if __name__ == "__main__":
    sys.exit(main())
