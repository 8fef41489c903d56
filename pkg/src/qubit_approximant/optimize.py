"""
Loss minimization: gradients, L-BFGS, CMA-ES and seeded multistart.

Every optimizer returns a :class:`FitResult`.  Non-convergence is reported
through ``FitResult.converged`` rather than raised, so benchmark sweeps always
complete.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy.optimize import minimize

Loss = Callable[[np.ndarray], float]

DEFAULT_MAX_ITERS = 1000
DEFAULT_GRAD_TOL = 1e-8
DEFAULT_F_TOL = 1e-12
DEFAULT_ES_BUDGET = 20_000
DEFAULT_RESTARTS = 10


@dataclass
class FitResult:
    best_params: np.ndarray
    best_loss: float
    loss_trace: list[float]
    evaluations: int
    restart_index: int = 0
    rng_seed: int | None = None
    converged: bool = True
    message: str = ""
    restart_losses: list[float] = field(default_factory=list)


def _fd_step(p: np.ndarray) -> np.ndarray:
    return 1e-5 * np.maximum(1.0, np.abs(p))


def gradient(loss: Loss, p, method: str = "finite_diff") -> np.ndarray:
    """Gradient of ``loss`` at ``p``.

    ``finite_diff`` uses central differences with ``h = 1e-5 max(1, |p_i|)``;
    ``parameter_shift`` needs a loss exposing a ``parameter_shift`` method
    (see :class:`qubit_approximant.encoding.CircuitLoss`).
    """
    p = np.asarray(p, dtype=float)
    if method == "parameter_shift":
        if not hasattr(loss, "parameter_shift"):
            raise TypeError("parameter_shift needs a circuit loss; use finite_diff instead")
        g = np.asarray(loss.parameter_shift(p), dtype=float)
        if not np.all(np.isfinite(g)):
            raise FloatingPointError("parameter-shift gradient is not finite")
        return g
    if method != "finite_diff":
        raise ValueError(f"unknown gradient method {method!r}")
    h = _fd_step(p)
    g = np.empty_like(p)
    for i in range(p.size):
        probe = p.copy()
        probe[i] = p[i] + h[i]
        up = loss(probe)
        probe[i] = p[i] - h[i]
        down = loss(probe)
        if not (math.isfinite(up) and math.isfinite(down)):
            raise FloatingPointError(f"loss is not finite at probe p[{i}] +- {h[i]:.3g}")
        g[i] = (up - down) / (2 * h[i])
    return g


def _default_jac(loss: Loss) -> Callable[[np.ndarray], np.ndarray]:
    exact = getattr(loss, "gradient", None) or getattr(loss, "parameter_shift", None)
    if exact is not None:
        return exact
    return lambda p: gradient(loss, p, "finite_diff")


def minimize_qn(
    loss: Loss,
    p0,
    max_iters: int = DEFAULT_MAX_ITERS,
    grad_tol: float = DEFAULT_GRAD_TOL,
    f_tol: float = DEFAULT_F_TOL,
    jac: Callable | None = None,
) -> FitResult:
    """L-BFGS descent from ``p0``.

    Uses the loss's own exact gradient when it has one (``gradient`` or
    ``parameter_shift`` attribute), otherwise central finite differences.
    """
    p0 = np.asarray(p0, dtype=float)
    if not np.all(np.isfinite(p0)):
        raise ValueError("initial point must be finite")
    jac = jac or _default_jac(loss)
    n_evals = 0

    def fun(p):
        nonlocal n_evals
        n_evals += 1
        f = float(loss(p))
        if not math.isfinite(f):
            # steer the line search away instead of aborting
            return np.inf, np.zeros_like(p)
        return f, jac(p)

    f0 = float(loss(p0))
    n_evals += 1
    trace = [f0]
    best = [p0.copy(), f0]

    def callback(intermediate_result):
        f = float(intermediate_result.fun)
        trace.append(min(f, trace[-1]))
        if f < best[1]:
            best[0], best[1] = intermediate_result.x.copy(), f

    res = minimize(
        fun,
        p0,
        jac=True,
        method="L-BFGS-B",
        callback=callback,
        options={"maxiter": max_iters, "gtol": grad_tol, "ftol": f_tol, "maxcor": 10},
    )
    if math.isfinite(res.fun) and res.fun < best[1]:
        best[0], best[1] = np.asarray(res.x, dtype=float).copy(), float(res.fun)
        trace.append(best[1])
    return FitResult(
        best_params=best[0],
        best_loss=best[1],
        loss_trace=trace,
        evaluations=n_evals,
        converged=bool(res.success),
        message=str(res.message),
    )


def default_population(dim: int) -> int:
    return max(4, int(round(4 + 3 * math.log(max(dim, 1)))))


def minimize_es(
    loss: Loss,
    p0,
    population: int | None = None,
    sigma0: float = 0.5,
    budget: int = DEFAULT_ES_BUDGET,
    seed: int = 0,
    f_target: float | None = None,
) -> FitResult:
    """CMA-ES with rank-one and rank-mu covariance updates and path-length step control.

    Stops when ``budget`` evaluations are spent, the step size collapses, or
    the best loss falls below ``f_target``.  The trace holds the best-so-far
    loss after each generation.
    """
    mean = np.asarray(p0, dtype=float).copy()
    if not np.all(np.isfinite(mean)):
        raise ValueError("initial point must be finite")
    if budget <= 0:
        raise ValueError("budget must be positive")
    n = mean.size
    lam = default_population(n) if population is None else int(population)
    if lam < 4:
        raise ValueError("population must be at least 4")
    if not sigma0 > 0:
        raise ValueError("sigma0 must be positive")
    rng = np.random.default_rng(seed)

    mu = lam // 2
    weights = np.log(mu + 0.5) - np.log(np.arange(1, mu + 1))
    weights /= weights.sum()
    mueff = 1.0 / np.sum(weights**2)
    cc = (4 + mueff / n) / (n + 4 + 2 * mueff / n)
    cs = (mueff + 2) / (n + mueff + 5)
    c1 = 2 / ((n + 1.3) ** 2 + mueff)
    cmu = min(1 - c1, 2 * (mueff - 2 + 1 / mueff) / ((n + 2) ** 2 + mueff))
    damps = 1 + 2 * max(0.0, math.sqrt((mueff - 1) / (n + 1)) - 1) + cs
    chi_n = math.sqrt(n) * (1 - 1 / (4 * n) + 1 / (21 * n * n))

    sigma = float(sigma0)
    C = np.eye(n)
    pc = np.zeros(n)
    ps = np.zeros(n)

    def f(p):
        v = float(loss(p))
        return v if math.isfinite(v) else np.inf

    best_x, best_f = mean.copy(), f(mean)
    evals = 1
    trace = [best_f]
    gen = 0
    message = "budget exhausted"
    converged = False
    while evals + lam <= budget:
        eigval, B = np.linalg.eigh(C)
        D = np.sqrt(np.maximum(eigval, 1e-300))
        z = rng.standard_normal((lam, n))
        y = (z * D) @ B.T
        xs = mean + sigma * y
        fs = np.array([f(x) for x in xs])
        evals += lam
        gen += 1

        order = np.argsort(fs, kind="stable")
        if fs[order[0]] < best_f:
            best_f, best_x = float(fs[order[0]]), xs[order[0]].copy()
        trace.append(best_f)

        y_sel = y[order[:mu]]
        y_w = weights @ y_sel
        mean = mean + sigma * y_w

        inv_sqrt_C_yw = B @ ((B.T @ y_w) / D)
        ps = (1 - cs) * ps + math.sqrt(cs * (2 - cs) * mueff) * inv_sqrt_C_yw
        ps_norm = float(np.linalg.norm(ps))
        hsig = ps_norm / math.sqrt(1 - (1 - cs) ** (2 * gen)) / chi_n < 1.4 + 2 / (n + 1)
        pc = (1 - cc) * pc + hsig * math.sqrt(cc * (2 - cc) * mueff) * y_w
        rank_mu = (y_sel.T * weights) @ y_sel
        C = (
            (1 - c1 - cmu) * C
            + c1 * (np.outer(pc, pc) + (not hsig) * cc * (2 - cc) * C)
            + cmu * rank_mu
        )
        C = (C + C.T) / 2
        sigma *= math.exp((cs / damps) * (ps_norm / chi_n - 1))

        if f_target is not None and best_f <= f_target:
            message, converged = "target reached", True
            break
        if sigma * float(np.max(D)) < 1e-12:
            message, converged = "step size collapsed", True
            break
        if not math.isfinite(sigma):
            message = "step size diverged"
            break
    return FitResult(
        best_params=best_x,
        best_loss=best_f,
        loss_trace=trace,
        evaluations=evals,
        rng_seed=seed,
        converged=converged,
        message=message,
    )


def restart_streams(seed: int, restarts: int) -> list[np.random.SeedSequence]:
    """Independent per-restart seed sequences; restart ``i`` is the same for any count."""
    return np.random.SeedSequence(seed).spawn(restarts)


def initial_point(stream: np.random.SeedSequence, n_params: int) -> np.ndarray:
    return np.random.default_rng(stream).uniform(-np.pi, np.pi, n_params)


def multistart(
    fit: Callable[[np.ndarray, int], FitResult],
    n_params: int,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    workers: int = 1,
) -> FitResult:
    """Best of ``restarts`` fits from uniform ``[-pi, pi]`` starting points.

    ``fit(p0, fit_seed)`` runs one local optimization.  Restart ``i`` draws its
    starting point and ``fit_seed`` from the ``i``-th child of
    ``SeedSequence(seed)``, so results do not depend on scheduling.
    """
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    streams = restart_streams(seed, restarts)

    def one(i):
        stream = streams[i]
        p0 = initial_point(stream, n_params)
        fit_seed = int(stream.generate_state(1)[0])
        return fit(p0, fit_seed)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, range(restarts)))
    else:
        results = [one(i) for i in range(restarts)]

    losses = [r.best_loss for r in results]
    finite = [i for i, v in enumerate(losses) if math.isfinite(v)]
    if not finite:
        raise RuntimeError("no restart produced a finite loss")
    best = min(finite, key=lambda i: (losses[i], i))
    return replace(results[best], restart_index=best, rng_seed=seed, restart_losses=losses)
