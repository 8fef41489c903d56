"""Export a benchmark report as CSV tables, fit curves and figures."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from . import plots
from .config import ExperimentConfig
from .runner import (
    BenchmarkReport,
    build_dataset,
    cell_key,
    dump_json,
    predict_record,
    verify_report,
)

FORMATS = ("table", "curves")

TABLE_COLUMNS = [
    "target",
    "family",
    "layers",
    "benchmark",
    "chi2",
    "chi2_exact",
    "chi2_sampled",
    "evaluations",
    "converged",
    "restart_index",
    "seed",
    "config_hash",
    "status",
]


class ReportMismatch(RuntimeError):
    """A stored chi-square does not match its re-evaluated parameters."""


class ExportError(OSError):
    pass


def _writable_dir(path: Path) -> Path:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ExportError(f"cannot create output directory {path}: {exc.strerror}") from exc
    probe = path / ".write-test"
    try:
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise ExportError(f"output directory is not writable: {path}") from exc
    return path


def _write_csv(path: Path, header: list[str], rows) -> Path:
    try:
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise ExportError(f"cannot write {path}: {exc.strerror}") from exc
    return path


def export(report: BenchmarkReport, fmt: str, out_dir) -> list[Path]:
    """Write ``table`` or ``curves`` output for ``report`` under ``out_dir``.

    Every stored chi-square is re-evaluated first; a mismatch above 1e-10
    raises :class:`ReportMismatch` and nothing is written.
    """
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")
    if not report.records:
        raise ValueError("report has no records")
    problems = [p for p in verify_report(report) if "cell failed" not in p]
    if problems:
        raise ReportMismatch("; ".join(problems))
    out = _writable_dir(Path(out_dir))
    written = _export_table(report, out) if fmt == "table" else _export_curves(report, out)
    sidecar = out / f"{fmt}.meta.json"
    dump_json(
        {
            "format": fmt,
            "config": report.config,
            "config_hash": report.config_hash,
            "versions": report.versions,
            "seeds": {
                cell_key(r["target"], r["family"], r["layers"]): r["seed"] for r in report.records
            },
            "files": sorted(str(p.relative_to(out)) for p in written),
        },
        sidecar,
    )
    return written + [sidecar]


def _export_table(report: BenchmarkReport, out: Path) -> list[Path]:
    rows = [[rec.get(col, "") if rec.get(col) is not None else "" for col in TABLE_COLUMNS] for rec in report.records]
    table = _write_csv(out / "table.csv", TABLE_COLUMNS, rows)
    fig_dir = _writable_dir(out / "figures")
    fig = plots.chi2_vs_layers(report.records, fig_dir / "chi2_vs_layers.png")
    return [table, fig]


def _export_curves(report: BenchmarkReport, out: Path) -> list[Path]:
    cfg = ExperimentConfig.from_dict(report.config)
    curve_dir = _writable_dir(out / "curves")
    datasets: dict[str, object] = {}
    written = []
    for rec in report.records:
        if rec["status"] != "ok":
            continue
        if rec["target"] not in datasets:
            target = next(t for t in cfg.targets if cfg.target_name(t) == rec["target"])
            datasets[rec["target"]] = build_dataset(cfg, target)[0]
        data = datasets[rec["target"]]
        pred = predict_record(rec, data)
        key = cell_key(rec["target"], rec["family"], rec["layers"])
        in_cols = ["x", "y"][: data.dim]
        if rec["benchmark"] == "Z":
            header = in_cols + ["target", "prediction"]
            cols = [data.target.real, np.real(pred)]
        else:
            header = in_cols + ["target_re", "target_im", "prediction_re", "prediction_im"]
            cols = [data.target.real, data.target.imag, pred.real, pred.imag]
        table = np.column_stack([data.x] + cols)
        written.append(_write_csv(curve_dir / f"{key}.csv", header, ([float(v) for v in row] for row in table)))
        title = f"{rec['target']} {rec['family']} L={rec['layers']}"
        if data.dim == 1:
            written.append(
                plots.curve_1d(data.x[:, 0], data.target, pred, curve_dir / f"{key}.png", title, rec["benchmark"] == "XY")
            )
        elif len(data.grid_shape) == 2:
            written.append(plots.curve_2d(data.x, data.grid_shape, data.target, pred, curve_dir / f"{key}.png", title))
    return written
