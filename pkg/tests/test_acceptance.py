"""
Acceptance checks, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line with the measured numbers
and then asserts.  Run with ``pytest tests/test_acceptance.py -v -s`` or as a
script: ``python tests/test_acceptance.py``.
"""

import math
import sys
import time

import numpy as np
import pytest

from qubit_approximant.baselines import fourier_fit, make_fitter
from qubit_approximant.bench import ExperimentConfig, export, run_experiment
from qubit_approximant.encoding import CircuitLoss, Dataset
from qubit_approximant.expansion import fourier_expansion, series_eval, uat_expansion
from qubit_approximant.gates import CircuitModel, FourierParams, amplitudes_10, final_states
from qubit_approximant.optimize import gradient, multistart
from qubit_approximant.sampling import ShotConfig, sample_expectations, sampled_chi2, variance_floor
from qubit_approximant.targets import TargetFunction, make_dataset

from conftest import ACCEPTANCE_LINES


def report(num, ok, detail, elapsed=None, budget=None):
    timing = ""
    if elapsed is not None:
        timing = f" [{elapsed:.1f}s]" if budget is None else f" [{elapsed:.1f}s / {budget}s]"
    line = f"{'PASS' if ok else 'FAIL'} criterion {num}: {detail}{timing}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def trend_sweep(tmp_path, name, **cfg):
    cfg = ExperimentConfig.from_dict(dict(cfg, output_dir=str(tmp_path / name)))
    start = time.perf_counter()
    rep = run_experiment(cfg, resume=False)
    elapsed = time.perf_counter() - start
    assert rep.ok, [r.get("error") for r in rep.records]
    chi2 = {(r["target"], r["family"], r["layers"]): r["chi2"] for r in rep.records}
    return chi2, elapsed


def test_criterion_01_fourier_series_equivalence():
    rng = np.random.default_rng(1)
    x = np.linspace(-1, 1, 50)
    start = time.perf_counter()
    worst = 0.0
    for N in range(1, 6):
        model = CircuitModel("fourier", N + 1)
        for _ in range(100):
            p = rng.uniform(-np.pi, np.pi, size=(N + 1, 5))
            p[0, 0] = 0.0
            p[1:, 0] = rng.uniform(0.2, 3.0)
            table = fourier_expansion([FourierParams(*row) for row in p])
            err = np.abs(series_eval(table, x) - amplitudes_10(model, p.ravel(), x)).max()
            worst = max(worst, err)
    elapsed = time.perf_counter() - start
    ok = worst < 1e-9 and elapsed < 10
    report(1, ok, f"Fourier series vs gate product, max |diff| = {worst:.2e} (< 1e-9)", elapsed, 10)
    assert ok


def test_criterion_02_uat_series_equivalence():
    rng = np.random.default_rng(2)
    start = time.perf_counter()
    worst = 0.0
    for m in (1, 2):
        X = rng.uniform(-1, 1, size=(50, m))
        for N in range(1, 6):
            model = CircuitModel("uat", N, m)
            for _ in range(100):
                p = rng.uniform(-np.pi, np.pi, size=model.n_params)
                table = uat_expansion(model.layer_gates(p))
                err = np.abs(series_eval(table, X) - amplitudes_10(model, p, X)).max()
                worst = max(worst, err)
    elapsed = time.perf_counter() - start
    ok = worst < 1e-9 and elapsed < 10
    report(2, ok, f"UAT expansion vs gate product, max |diff| = {worst:.2e} (< 1e-9)", elapsed, 10)
    assert ok


def test_criterion_03_parameter_shift_gradients():
    rng = np.random.default_rng(3)
    x = np.linspace(-1, 1, 21)
    targets = {"Z": np.tanh(5 * x), "XY": (np.tanh(5 * x) + 1j * np.maximum(0, x)) / math.sqrt(2)}
    start = time.perf_counter()
    worst = 0.0
    combos = [(f, k, b) for f in ("fourier", "uat") for k in (1, 2, 3, 4) for b in ("Z", "XY")]
    for i in range(50):
        family, layers, bench = combos[i % len(combos)]
        loss = CircuitLoss(CircuitModel(family, layers), Dataset(x, targets[bench], ((-1.0, 1.0),)), bench)
        p = rng.uniform(-np.pi, np.pi, size=loss.n_params)
        ps = gradient(loss, p, "parameter_shift")
        fd = gradient(loss, p, "finite_diff")
        worst = max(worst, np.max(np.abs(ps - fd)) / np.max(np.abs(ps)))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-5 and elapsed < 30
    report(3, ok, f"parameter shift vs central differences, max rel. error = {worst:.2e} (< 1e-5)", elapsed, 30)
    assert ok


def test_criterion_04_classical_fourier_oracle():
    t = TargetFunction("x", 1, "real", ((-1.0, 1.0),), lambda X: X[:, 0])
    start = time.perf_counter()
    s = fourier_fit(t, 10, resolution=10_000)
    errs = [abs(s.coefficient(0))]
    for n in range(1, 11):
        for k in (n, -n):
            errs.append(abs(s.coefficient(k) - 1j * (-1) ** k / (k * math.pi)))
    elapsed = time.perf_counter() - start
    worst = max(errs)
    ok = worst < 1e-6 and elapsed < 5
    report(4, ok, f"c_n of f(x)=x vs i(-1)^n/(n pi), max error = {worst:.2e} (< 1e-6)", elapsed, 5)
    assert ok


def _non_increasing(values, band=0.10):
    return all(b <= a * (1 + band) for a, b in zip(values, values[1:]))


@pytest.mark.slow
def test_criterion_05_layer_capacity(tmp_path):
    chi2, elapsed = trend_sweep(tmp_path, "c5", targets=["tanh5", "relu"], families=["uat"], layers=[1, 2, 3, 4, 5, 6])
    parts, ok = [], elapsed < 600
    for t in ("tanh5", "relu"):
        seq = [chi2[(t, "uat", k)] for k in range(1, 7)]
        ratio = seq[0] / seq[-1]
        ok &= ratio >= 10 and _non_increasing(seq)
        parts.append(f"{t}: L1/L6 = {ratio:.3g}, monotone(10%) = {_non_increasing(seq)}")
    report(5, ok, "quantum UAT, Z; " + "; ".join(parts), elapsed, 600)
    assert ok


@pytest.mark.slow
def test_criterion_06_quantum_vs_classical_fourier(tmp_path):
    chi2, elapsed = trend_sweep(tmp_path, "c6", targets=["relu"], families=["fourier", "classical-fourier"], layers=[3])
    q, c = chi2[("relu", "fourier", 3)], chi2[("relu", "classical-fourier", 3)]
    ok = q <= c and elapsed < 300
    report(6, ok, f"relu, 3 layers / N=3: quantum {q:.3g} <= classical {c:.3g}", elapsed, 300)
    assert ok


@pytest.mark.slow
def test_criterion_07_complex_fit(tmp_path):
    chi2, elapsed = trend_sweep(
        tmp_path, "c7", targets=["tanh5+i*relu"], families=["uat"], layers=[1, 5], benchmark="XY"
    )
    c1, c5 = chi2[("tanh5+i*relu", "uat", 1)], chi2[("tanh5+i*relu", "uat", 5)]
    ok = c5 < 0.5 * c1 and elapsed < 600
    report(7, ok, f"tanh5 + i relu, XY: L5 {c5:.3g} < 0.5 x L1 {c1:.3g}", elapsed, 600)
    assert ok


@pytest.mark.slow
def test_criterion_08_himmelblau(tmp_path):
    chi2, elapsed = trend_sweep(tmp_path, "c8", targets=["himmelblau"], families=["uat"], layers=[1, 5])
    c1, c5 = chi2[("himmelblau", "uat", 1)], chi2[("himmelblau", "uat", 5)]
    ok = c5 < c1 and elapsed < 900
    report(8, ok, f"himmelblau 31x31, Z: L5 {c5:.4g} < L1 {c1:.4g}", elapsed, 900)
    assert ok


def test_criterion_09_shot_noise_floor():
    start = time.perf_counter()
    # a constant target has an exact one-layer representation
    t = TargetFunction("half", 1, "real", ((-1.0, 1.0),), lambda X: np.full(len(X), 0.5))
    data = make_dataset(t, 101)
    model = CircuitModel("uat", 1)
    loss = CircuitLoss(model, data, "Z")
    fit = multistart(make_fitter(loss), loss.n_params, restarts=10, seed=0)
    shots = 50_000
    sampled = sampled_chi2(model, fit.best_params, data, "Z", ShotConfig(shots, 0))
    floor = variance_floor(model, fit.best_params, data, "Z", shots)
    ratio = sampled / floor

    state = final_states(model, fit.best_params, data.x[:1])
    reps = np.repeat(state, 2000, axis=0)
    counts = np.array([100, 1000, 10_000])
    stds = [sample_expectations(reps, "Z", ShotConfig(int(n), 1)).std() for n in counts]
    slope = float(np.polyfit(np.log(counts), np.log(stds), 1)[0])
    elapsed = time.perf_counter() - start
    ok = fit.best_loss < 1e-10 and sampled > 0 and 1 / 3 <= ratio <= 3 and abs(slope + 0.5) <= 0.1 and elapsed < 120
    report(
        9,
        ok,
        f"exact chi2 {fit.best_loss:.1e}; sampled {sampled:.3g} vs floor {floor:.3g} (ratio {ratio:.2f}); "
        f"log-std slope {slope:.3f}",
        elapsed,
        120,
    )
    assert ok


def test_criterion_10_end_to_end_determinism(tmp_path):
    raw = dict(
        targets=["relu", "tanh5+i*relu"],
        families=["uat", "classical-uat", "fourier", "classical-fourier"],
        layers=[1, 2],
        benchmark="XY",
        restarts=2,
        shots=2000,
        seed=17,
    )
    start = time.perf_counter()
    files = {}
    for run in ("a", "b"):
        out = tmp_path / run
        rep = run_experiment(ExperimentConfig.from_dict(dict(raw, output_dir=str(out))), resume=False)
        for fmt in ("table", "curves"):
            export(rep, fmt, out)
        files[run] = {
            str(p.relative_to(out)): p.read_bytes()
            for p in sorted(out.rglob("*"))
            if p.is_file() and p.name != "timings.json" and p.parent.name != "cells"
        }
    elapsed = time.perf_counter() - start
    same = files["a"] == files["b"]
    ok = same and "report.json" in files["a"]
    report(10, ok, f"two runs, {len(files['a'])} report/export files byte-identical: {same}", elapsed)
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider", *sys.argv[1:]]))
