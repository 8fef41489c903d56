"""Sweep execution: one fitted record per (target, family, layers) cell."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .. import __version__
from ..baselines import ClassicalUatLoss, FourierSeries, fourier_eval, fourier_fit, make_fitter
from ..encoding import CircuitLoss, Dataset, chi2_from_predictions, readout
from ..gates import CircuitModel, final_states
from ..optimize import gradient, multistart
from ..sampling import ShotConfig, sampled_chi2
from ..targets import (
    DOMAIN_1D,
    DOMAIN_2D,
    SCAN_POINTS_1D,
    SCAN_POINTS_2D,
    TargetFunction,
    get_target,
    grid,
    load_table,
    make_dataset,
)
from .config import ExperimentConfig

log = logging.getLogger(__name__)

WORKERS_ENV = "QAPPROX_WORKERS"
REPORT_FILE = "report.json"
TIMINGS_FILE = "timings.json"
CELLS_DIR = "cells"


@dataclass
class BenchmarkReport:
    config: dict
    config_hash: str
    versions: dict
    records: list[dict]

    @property
    def ok(self) -> bool:
        return all(r["status"] == "ok" for r in self.records)

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "config_hash": self.config_hash,
            "versions": self.versions,
            "records": self.records,
        }

    @classmethod
    def load(cls, path) -> "BenchmarkReport":
        d = json.loads(Path(path).read_text())
        return cls(d["config"], d["config_hash"], d["versions"], d["records"])


def versions() -> dict:
    import scipy

    return {"qubit_approximant": __version__, "numpy": np.__version__, "scipy": scipy.__version__}


def dump_json(obj, path: Path) -> None:
    """Deterministic JSON write via a temporary file and rename."""
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n")
    os.replace(tmp, path)


def cell_key(target: str, family: str, layers: int) -> str:
    safe = target.replace("+i*", "_plus_i_").replace("/", "_")
    return f"{safe}__{family}__L{layers}"


def cell_seed(master: int, key: str) -> int:
    digest = hashlib.sha256(f"{master}:{key}".encode()).digest()
    return int.from_bytes(digest[:4], "little")


def _table_function(data: Dataset) -> TargetFunction:
    xs, vals = data.x[:, 0], data.target * data.scale
    order = np.argsort(xs)
    xs, vals = xs[order], vals[order]

    def raw(X):
        x = X[:, 0]
        return np.interp(x, xs, vals.real) + 1j * np.interp(x, xs, vals.imag)

    kind = data.meta.get("kind", "real")
    return TargetFunction(data.name, 1, kind, data.domain, raw, scale=data.scale)


def build_dataset(cfg: ExperimentConfig, target) -> tuple[Dataset, TargetFunction | None]:
    """Training dataset for a configured target, plus its function when one exists."""
    if isinstance(target, dict):
        data = load_table(target["file"], target["name"])
        return data, (_table_function(data) if data.dim == 1 else None)
    if cfg.target_dim(target) == 1:
        domain, n, n_scan = DOMAIN_1D, cfg.points_1d, SCAN_POINTS_1D
    else:
        domain, n, n_scan = DOMAIN_2D, cfg.points_2d, SCAN_POINTS_2D
    # normalize over the dense scan grid and the training grid together
    points = np.vstack([grid(domain, n_scan)[0], grid(domain, n)[0]])
    tf = get_target(target, points=points)
    return make_dataset(tf, n), tf


def predict_record(record: dict, data: Dataset) -> np.ndarray:
    """Model output for a stored record on the rows of ``data.x``."""
    family, layers, bench = record["family"], record["layers"], record["benchmark"]
    params = np.asarray(record["params"], dtype=float)
    if family in ("fourier", "uat"):
        model = CircuitModel(family, layers, data.dim, record["initial_state"])
        return readout(final_states(model, params, data.x), bench)
    if family == "classical-uat":
        return ClassicalUatLoss(layers, data, bench).predict(params)
    coeffs = params[0::2] + 1j * params[1::2]
    series = FourierSeries(record["period"], coeffs)
    return fourier_eval(series, data.x[:, 0])


def record_chi2(record: dict, data: Dataset) -> tuple[float, float | None]:
    """Recompute ``(chi2_exact, chi2_sampled)`` for a record."""
    exact = chi2_from_predictions(predict_record(record, data), data, record["benchmark"])
    sampled = None
    if record.get("shots") and record["family"] in ("fourier", "uat"):
        model = CircuitModel(record["family"], record["layers"], data.dim, record["initial_state"])
        cfg = ShotConfig(record["shots"], record["seed"])
        sampled = sampled_chi2(model, record["params"], data, record["benchmark"], cfg)
    return exact, sampled


def _fit_kwargs(opt: dict) -> tuple[str, str, dict]:
    opt = dict(opt)
    method = opt.pop("method", "lbfgs")
    grad_method = opt.pop("gradient", "parameter_shift")
    return method, grad_method, opt


def run_cell(cfg_dict: dict, target, family: str, layers: int) -> dict:
    """Fit one cell; returns the JSON-ready record (plus ``wall_time``)."""
    cfg = ExperimentConfig.from_dict(cfg_dict)
    name = cfg.target_name(target)
    key = cell_key(name, family, layers)
    seed = cell_seed(cfg.seed, key)
    record = {
        "target": name,
        "family": family,
        "layers": layers,
        "benchmark": cfg.benchmark,
        "seed": seed,
        "config_hash": cfg.config_hash(),
        "shots": cfg.shots,
    }
    start = time.perf_counter()
    try:
        data, tf = build_dataset(cfg, target)
        record["grid_shape"] = list(data.grid_shape)
        record["scale"] = float(data.scale)
        if family == "classical-fourier":
            series = fourier_fit(tf, layers, cfg.fourier_resolution)
            params = np.column_stack([series.coefficients.real, series.coefficients.imag]).ravel()
            record.update(
                params=[float(v) for v in params],
                period=float(series.period),
                evaluations=0,
                converged=True,
                restart_index=0,
                restart_losses=[],
            )
        else:
            method, grad_method, opt = _fit_kwargs(cfg.optimizer)
            if family == "classical-uat":
                loss = ClassicalUatLoss(layers, data, cfg.benchmark)
            else:
                model = CircuitModel(family, layers, data.dim)
                record["initial_state"] = model.initial_state
                loss = CircuitLoss(model, data, cfg.benchmark)
            if grad_method == "finite_diff" and method == "lbfgs":
                opt["jac"] = lambda p: gradient(loss, p, "finite_diff")
            result = multistart(make_fitter(loss, method, **opt), loss.n_params, cfg.restarts, seed)
            record.update(
                params=[float(v) for v in result.best_params],
                evaluations=int(result.evaluations),
                converged=bool(result.converged),
                restart_index=int(result.restart_index),
                restart_losses=[float(v) for v in result.restart_losses],
            )
        exact, sampled = record_chi2(record, data)
        record["chi2_exact"] = exact
        record["chi2_sampled"] = sampled
        record["chi2"] = sampled if sampled is not None else exact
        record["status"] = "ok"
    except Exception as exc:  # a failed cell must not abort the sweep
        log.exception("cell %s failed", key)
        record["status"] = "failed"
        record["error"] = f"{type(exc).__name__}: {exc}"
    record["wall_time"] = time.perf_counter() - start
    return record


def _cells(cfg: ExperimentConfig):
    for target in cfg.targets:
        for family in cfg.families:
            for layers in cfg.layers:
                yield target, family, layers


def run_experiment(cfg: ExperimentConfig, workers: int | None = None, resume: bool = True) -> BenchmarkReport:
    """Run every cell of the sweep and write ``report.json`` under ``cfg.output_dir``.

    Each finished cell is written to ``cells/`` at once; with ``resume`` a
    rerun reuses cells whose config hash matches.  Wall times go to
    ``timings.json`` so that ``report.json`` depends only on config and seed.
    """
    cfg.validate()
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    out = Path(cfg.output_dir)
    cells_dir = out / CELLS_DIR
    cells_dir.mkdir(parents=True, exist_ok=True)
    chash = cfg.config_hash()
    cfg_dict = cfg.to_dict()
    # the output location is not part of the result
    report_cfg = {k: v for k, v in cfg_dict.items() if k != "output_dir"}

    done: dict[str, dict] = {}
    todo = []
    for target, family, layers in _cells(cfg):
        key = cell_key(cfg.target_name(target), family, layers)
        path = cells_dir / f"{key}.json"
        if resume and path.exists():
            rec = json.loads(path.read_text())
            if rec.get("config_hash") == chash and rec.get("status") == "ok":
                done[key] = rec
                continue
        todo.append((key, target, family, layers))

    def store(key, rec):
        dump_json(rec, cells_dir / f"{key}.json")
        done[key] = rec
        log.info("%s: chi2=%s (%s)", key, rec.get("chi2"), rec["status"])

    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(run_cell, cfg_dict, t, f, k): key for key, t, f, k in todo}
            for fut in as_completed(futures):
                store(futures[fut], fut.result())
    else:
        for key, t, f, k in todo:
            store(key, run_cell(cfg_dict, t, f, k))

    records, timings = [], {}
    for target, family, layers in _cells(cfg):
        key = cell_key(cfg.target_name(target), family, layers)
        rec = dict(done[key])
        timings[key] = rec.pop("wall_time", None)
        records.append(rec)

    report = BenchmarkReport(report_cfg, chash, versions(), records)
    dump_json(report.to_dict(), out / REPORT_FILE)
    dump_json(timings, out / TIMINGS_FILE)
    return report


def verify_report(report: BenchmarkReport, tol: float = 1e-10) -> list[str]:
    """Re-evaluate every stored parameter vector; returns mismatch descriptions."""
    cfg = ExperimentConfig.from_dict(report.config)
    datasets = {}
    problems = []
    for rec in report.records:
        key = cell_key(rec["target"], rec["family"], rec["layers"])
        if rec["status"] != "ok":
            problems.append(f"{key}: cell failed ({rec.get('error')})")
            continue
        target = next(t for t in cfg.targets if cfg.target_name(t) == rec["target"])
        if rec["target"] not in datasets:
            datasets[rec["target"]] = build_dataset(cfg, target)[0]
        exact, sampled = record_chi2(rec, datasets[rec["target"]])
        if abs(exact - rec["chi2_exact"]) > tol:
            problems.append(f"{key}: stored chi2 {rec['chi2_exact']!r}, recomputed {exact!r}")
        if sampled is not None and abs(sampled - rec["chi2_sampled"]) > tol:
            problems.append(f"{key}: stored sampled chi2 {rec['chi2_sampled']!r}, recomputed {sampled!r}")
    return problems
