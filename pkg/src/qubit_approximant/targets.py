"""
Benchmark target functions, normalization and dataset grids.

One-dimensional targets live on ``[-1, 1]``, two-dimensional ones on
``[-5, 5]^2``.  Normalization divides by the largest absolute value (or
modulus) seen on a scan grid, so zeros and signs are preserved, the peak
becomes exactly one and ReLU stays within ``[0, 1]``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Literal

import numpy as np

from .encoding import Dataset

DOMAIN_1D = ((-1.0, 1.0),)
DOMAIN_2D = ((-5.0, 5.0), (-5.0, 5.0))

# Default grid sizes: training and scan/evaluation.
TRAIN_POINTS_1D = 101
TRAIN_POINTS_2D = 31
SCAN_POINTS_1D = 1001
SCAN_POINTS_2D = 101


def relu(x):
    return np.maximum(0.0, x)


def tanh5(x):
    return np.tanh(5.0 * x)


def step(x):
    # x / |x|, with step(0) = 0
    return np.sign(x).astype(float)


def poly(x):
    return np.abs(3.0 * x**3 * (1.0 - x**4))


def himmelblau(x, y):
    return (x**2 + y - 11.0) ** 2 + (x + y**2 - 7.0) ** 2


def brent(x, y):
    u, v = x / 2.0, y / 2.0
    return u**2 + v**2 + np.exp(-((u - 5.0) ** 2 + (v - 5.0) ** 2))


def threehump(x, y):
    u, v = 2.0 * x / 5.0, 2.0 * y / 5.0
    return 2.0 * u**2 - 1.05 * u**4 + u**6 / 6.0 + u * v + v**2


def adjiman(x, y):
    return np.cos(x) * np.sin(y) - x / (y**2 + 1.0)


FUNCS_1D: dict[str, Callable] = {"relu": relu, "tanh5": tanh5, "step": step, "poly": poly}
FUNCS_2D: dict[str, Callable] = {
    "himmelblau": himmelblau,
    "brent": brent,
    "threehump": threehump,
    "adjiman": adjiman,
}


def eval_1d(name: str, x):
    """Raw value of a named one-dimensional target."""
    try:
        fn = FUNCS_1D[name]
    except KeyError:
        raise ValueError(f"unknown 1D target {name!r}; choose from {sorted(FUNCS_1D)}") from None
    out = fn(np.asarray(x, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def eval_2d(name: str, x, y):
    """Raw value of a named two-dimensional target."""
    try:
        fn = FUNCS_2D[name]
    except KeyError:
        raise ValueError(f"unknown 2D target {name!r}; choose from {sorted(FUNCS_2D)}") from None
    out = fn(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class TargetFunction:
    """A named target with its domain and normalization scale.

    ``raw`` maps an ``(M, dim)`` array of points to ``M`` raw values (complex
    for ``kind == "complex"``); calling the target returns ``raw / scale``.
    """

    name: str
    dim: int
    kind: Literal["real", "complex"]
    domain: tuple[tuple[float, float], ...]
    raw: Callable[[np.ndarray], np.ndarray]
    scale: float = 1.0
    offset: float = 0.0

    def __call__(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float).reshape(-1, self.dim)
        return (self.raw(X) - self.offset) / self.scale


def _raw_1d(name):
    fn = FUNCS_1D[name]
    return lambda X: fn(X[:, 0])


def _raw_2d(name):
    fn = FUNCS_2D[name]
    return lambda X: fn(X[:, 0], X[:, 1])


def grid(domain, n) -> tuple[np.ndarray, tuple[int, ...]]:
    """Uniform grid with inclusive endpoints; returns points ``(M, dim)`` and its shape."""
    shape = tuple(int(k) for k in np.broadcast_to(n, (len(domain),)))
    if any(k < 2 for k in shape):
        raise ValueError(f"grid needs at least 2 points per dimension, got {shape}")
    axes = [np.linspace(lo, hi, k) for (lo, hi), k in zip(domain, shape)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1), shape


def scan_grid(t: TargetFunction) -> np.ndarray:
    n = SCAN_POINTS_1D if t.dim == 1 else SCAN_POINTS_2D
    return grid(t.domain, n)[0]


def normalize(t: TargetFunction, points=None) -> TargetFunction:
    """Rescale ``t`` so that ``|t| <= 1`` on ``points`` (default: the dense scan grid).

    The scale is the largest raw magnitude on the grid; an all-zero target
    keeps scale one.  Idempotent on the same grid.
    """
    points = scan_grid(t) if points is None else np.asarray(points, dtype=float).reshape(-1, t.dim)
    if points.shape[0] == 0:
        raise ValueError("normalization grid is empty")
    peak = float(np.max(np.abs(t.raw(points) - t.offset)))
    return replace(t, scale=_scale_for(peak))


def _scale_for(peak: float) -> float:
    if not np.isfinite(peak):
        raise ValueError("target is not finite on the normalization grid")
    return peak if peak > 0.0 else 1.0


def get_target(name: str, points=None) -> TargetFunction:
    """Normalized target from the registry.

    ``"re+i*im"`` builds a complex target from two one-dimensional names.
    """
    if "+i*" in name:
        re_name, im_name = name.split("+i*", 1)
        return make_complex(re_name, im_name, points)
    if name in FUNCS_1D:
        t = TargetFunction(name, 1, "real", DOMAIN_1D, _raw_1d(name))
    elif name in FUNCS_2D:
        t = TargetFunction(name, 2, "real", DOMAIN_2D, _raw_2d(name))
    else:
        known = sorted(FUNCS_1D) + sorted(FUNCS_2D)
        raise ValueError(f"unknown target {name!r}; choose from {known} or 're+i*im'")
    return normalize(t, points)


def make_complex(real_name: str, imag_name: str, points=None) -> TargetFunction:
    """``z = f_re + i f_im`` from two 1D targets, normalized by the largest modulus."""
    for nm in (real_name, imag_name):
        if nm not in FUNCS_1D:
            raise ValueError(f"complex targets combine 1D functions; unknown {nm!r}")
    f_re, f_im = FUNCS_1D[real_name], FUNCS_1D[imag_name]
    t = TargetFunction(
        f"{real_name}+i*{imag_name}",
        1,
        "complex",
        DOMAIN_1D,
        lambda X: f_re(X[:, 0]) + 1j * f_im(X[:, 0]),
    )
    return normalize(t, points)


def make_dataset(t: TargetFunction, n_points=None) -> Dataset:
    """Sample ``t`` on a uniform grid over its domain (inclusive endpoints)."""
    if n_points is None:
        n_points = TRAIN_POINTS_1D if t.dim == 1 else TRAIN_POINTS_2D
    X, shape = grid(t.domain, n_points)
    return Dataset(
        x=X,
        target=t(X),
        domain=t.domain,
        grid_shape=shape,
        scale=t.scale,
        name=t.name,
        meta={"kind": t.kind},
    )


def load_table(path, name: str | None = None) -> Dataset:
    """Dataset from a CSV table with columns ``x[,y],value[,imag]`` and a header row.

    Values are divided by their largest magnitude (if nonzero).  The
    domain is the bounding box of the inputs.
    """
    import csv
    from pathlib import Path

    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"{path}: no data rows")
    cols = list(rows[0])
    in_cols = [c for c in ("x", "y") if c in cols]
    if not in_cols or "value" not in cols:
        raise ValueError(f"{path}: need columns x[,y],value[,imag], got {cols}")
    X = np.array([[float(r[c]) for c in in_cols] for r in rows])
    vals = np.array([float(r["value"]) for r in rows], dtype=complex)
    if "imag" in cols:
        vals += 1j * np.array([float(r["imag"]) for r in rows])
    scale = _scale_for(float(np.max(np.abs(vals))))
    domain = tuple((float(X[:, j].min()), float(X[:, j].max())) for j in range(X.shape[1]))
    return Dataset(
        x=X,
        target=vals / scale,
        domain=domain,
        grid_shape=(len(rows),),
        scale=scale,
        name=name or path.stem,
        meta={"kind": "complex" if "imag" in cols else "real", "source": str(path)},
    )
