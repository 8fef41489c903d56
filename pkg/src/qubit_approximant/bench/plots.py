"""
Figure rendering for exported reports.

Figures are built on bare :class:`matplotlib.figure.Figure` objects (no
pyplot state) and saved without timestamp metadata, so repeated exports of the
same report produce identical PNG bytes.
"""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

FAMILY_STYLE = {
    "fourier": dict(color="tab:red", marker="^", label="quantum Fourier"),
    "uat": dict(color="tab:red", marker="x", label="quantum UAT"),
    "classical-fourier": dict(color="tab:blue", marker="^", label="classical Fourier"),
    "classical-uat": dict(color="tab:blue", marker="x", label="classical UAT"),
}

RC = {"font.size": 9, "axes.titlesize": 9, "legend.fontsize": 7}


def _save(fig: Figure, path: Path) -> Path:
    FigureCanvasAgg(fig)
    fig.savefig(path, dpi=100, metadata={"Software": None})
    return path


def chi2_vs_layers(records: list[dict], path: Path) -> Path:
    """One panel per target: chi-square against layer count, log scale."""
    import matplotlib as mpl

    by_target: dict[str, list[dict]] = defaultdict(list)
    for rec in records:
        if rec["status"] == "ok":
            by_target[rec["target"]].append(rec)
    targets = list(by_target)
    ncols = min(len(targets), 4) or 1
    nrows = max(1, -(-len(targets) // ncols))
    with mpl.rc_context(RC):
        fig = Figure(figsize=(3.0 * ncols, 2.6 * nrows))
        axes = fig.subplots(nrows, ncols, squeeze=False).ravel()
        for ax, target in zip(axes, targets):
            fams: dict[str, list[dict]] = defaultdict(list)
            for rec in by_target[target]:
                fams[rec["family"]].append(rec)
            for fam, recs in fams.items():
                recs.sort(key=lambda r: r["layers"])
                layers = [r["layers"] for r in recs]
                chi2 = [max(r["chi2"], 1e-16) for r in recs]
                ax.plot(layers, chi2, linestyle="none", **FAMILY_STYLE[fam])
            ax.set_yscale("log")
            ax.set_xlabel("layers")
            ax.set_ylabel(r"$\chi^2$")
            ax.set_title(target)
            ax.legend(loc="best")
        for ax in axes[len(targets):]:
            ax.set_visible(False)
        fig.tight_layout()
        return _save(fig, path)


def curve_1d(x, target, pred, path: Path, title: str, is_complex: bool = False) -> Path:
    """Target and model output against ``x``; complex values get two panels."""
    import matplotlib as mpl

    parts = [("real", np.real)] + ([("imag", np.imag)] if is_complex else [])
    with mpl.rc_context(RC):
        fig = Figure(figsize=(3.4 * len(parts), 2.6))
        axes = fig.subplots(1, len(parts), squeeze=False)[0]
        for ax, (label, part) in zip(axes, parts):
            ax.plot(x, part(target), color="black", label="target")
            ax.plot(x, part(pred), color="tab:red", marker=".", markersize=3, linestyle="none", label="model")
            ax.set_xlabel("x")
            ax.set_title(f"{title} ({label})" if is_complex else title)
            ax.legend(loc="best")
        fig.tight_layout()
        return _save(fig, path)


def curve_2d(X: np.ndarray, grid_shape, target, pred, path: Path, title: str) -> Path:
    """Contour maps of target and model output on the training grid."""
    import matplotlib as mpl

    nx, ny = grid_shape
    xx = X[:, 0].reshape(nx, ny)
    yy = X[:, 1].reshape(nx, ny)
    levels = np.linspace(-1, 1, 11)
    with mpl.rc_context(RC):
        fig = Figure(figsize=(6.4, 2.8))
        axes = fig.subplots(1, 2)
        for ax, vals, label in zip(axes, (target, pred), ("target", "model")):
            cs = ax.contourf(xx, yy, np.real(vals).reshape(nx, ny), levels=levels, cmap="viridis")
            ax.set_title(f"{title}: {label}")
            ax.set_xlabel("x")
            ax.set_ylabel("y")
        fig.colorbar(cs, ax=list(axes))
        return _save(fig, path)
