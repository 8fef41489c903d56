"""
Benchmark encodings and their chi-square losses.

* Z benchmark: a real target ``f`` is read from ``<Z>`` of the output state.
* X-Y benchmark: a complex target ``z`` is read from ``<X> + i <Y>``.

:class:`CircuitLoss` bundles model, dataset and benchmark into a callable
loss with an exact parameter-shift gradient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .gates import CircuitModel, final_states, rotation_plan
from .linalg import (
    apply_rotation_batch,
    pauli_expectations,
    rotation_y,
    rotation_y_batch,
    rotation_z,
    rotation_z_batch,
)

Benchmark = Literal["Z", "XY"]
BENCHMARKS = ("Z", "XY")
TARGET_TOL = 1e-9


@dataclass(frozen=True)
class Dataset:
    """Sampled training grid ``(x_j, target_j)``.

    ``x`` has shape ``(M, m)`` and ``target`` is complex of shape ``(M,)``.
    ``scale`` is the divisor that was applied to the raw target values.
    """

    x: np.ndarray
    target: np.ndarray
    domain: tuple[tuple[float, float], ...]
    grid_shape: tuple[int, ...] = ()
    scale: float = 1.0
    name: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        if x.ndim == 1:
            x = x.reshape(-1, 1)
        target = np.asarray(self.target, dtype=complex).reshape(-1)
        if x.shape[0] == 0:
            raise ValueError("dataset is empty")
        if target.shape[0] != x.shape[0]:
            raise ValueError(f"{x.shape[0]} inputs but {target.shape[0]} targets")
        if len(self.domain) != x.shape[1]:
            raise ValueError("domain must give one interval per input dimension")
        for j, (lo, hi) in enumerate(self.domain):
            if np.any(x[:, j] < lo - 1e-12) or np.any(x[:, j] > hi + 1e-12):
                raise ValueError(f"inputs fall outside the domain [{lo}, {hi}] in dimension {j}")
        if np.any(np.abs(target) > 1 + TARGET_TOL):
            raise ValueError("targets must satisfy |target| <= 1")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "domain", tuple((float(lo), float(hi)) for lo, hi in self.domain))

    def __len__(self) -> int:
        return self.x.shape[0]

    @property
    def dim(self) -> int:
        return self.x.shape[1]

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.target.imag == 0))

    def check_for(self, benchmark: str) -> None:
        if benchmark not in BENCHMARKS:
            raise ValueError(f"unknown benchmark {benchmark!r}")
        if benchmark == "Z" and not self.is_real:
            raise ValueError("the Z benchmark needs a real-valued target")


def encode_state(model: CircuitModel, params, x) -> np.ndarray:
    """Output state of the circuit applied to the model's initial state."""
    states = final_states(model, params, x)
    if states.shape[0] != 1:
        raise ValueError("encode_state takes a single input point")
    return states[0]


def readout(states: np.ndarray, benchmark: str) -> np.ndarray:
    """``<Z>`` (real) or ``<X> + i<Y>`` (complex) for each state."""
    if benchmark == "Z":
        return pauli_expectations(states, "Z")
    return pauli_expectations(states, "X") + 1j * pauli_expectations(states, "Y")


def chi2_from_predictions(pred: np.ndarray, data: Dataset, benchmark: str) -> float:
    if benchmark == "Z":
        res = np.real(pred) - data.target.real
        return float(np.mean(res * res))
    res = pred - data.target
    return float(np.mean(res.real**2 + res.imag**2))


def chi2_z(model: CircuitModel, params, data: Dataset) -> float:
    """Mean squared deviation of ``<Z>`` from the target."""
    data.check_for("Z")
    return chi2_from_predictions(readout(final_states(model, params, data.x), "Z"), data, "Z")


def chi2_xy(model: CircuitModel, params, data: Dataset) -> float:
    """Mean squared modulus of ``<X> + i<Y> - z``."""
    data.check_for("XY")
    return chi2_from_predictions(readout(final_states(model, params, data.x), "XY"), data, "XY")


_SHIFT = math.pi / 2


class CircuitLoss:
    """Chi-square of a circuit model on a dataset, as a function of the flat parameters."""

    def __init__(self, model: CircuitModel, data: Dataset, benchmark: str = "Z"):
        data.check_for(benchmark)
        self.model = model
        self.data = data
        self.benchmark = benchmark
        self.X = model.check_inputs(data.x)

    @property
    def n_params(self) -> int:
        return self.model.n_params

    def predict(self, params, X=None) -> np.ndarray:
        X = self.X if X is None else X
        return readout(final_states(self.model, params, X), self.benchmark)

    def __call__(self, params) -> float:
        return chi2_from_predictions(self.predict(params), self.data, self.benchmark)

    def parameter_shift(self, params) -> np.ndarray:
        """Exact gradient via the two-term shift rule on every rotation.

        Each rotation ``R(t) = exp(+-i t P / 2)`` contributes
        ``d<O>/dt = (<O>(t + pi/2) - <O>(t - pi/2)) / 2``; parameters feeding
        several rotations, or entering scaled by an input coordinate, are
        combined by the chain rule.
        """
        plan = rotation_plan(self.model, params, self.X)
        M = self.X.shape[0]

        prefix = [np.tile(self.model.initial, (M, 1))]
        for rot in plan:
            prefix.append(apply_rotation_batch(rot.axis, rot.angle, prefix[-1]))

        # suffix[r] = R_last ... R_r, so the output is suffix[r] @ prefix[r]
        suffix = [None] * (len(plan) + 1)
        suffix[-1] = np.broadcast_to(np.eye(2, dtype=complex), (M, 2, 2))
        for r in range(len(plan) - 1, -1, -1):
            rot = plan[r]
            mats = rotation_y_batch(rot.angle) if rot.axis == "y" else rotation_z_batch(rot.angle)
            suffix[r] = suffix[r + 1] @ mats

        pred = readout(np.einsum("mij,mj->mi", suffix[0], prefix[0]), self.benchmark)
        res = pred - (self.data.target.real if self.benchmark == "Z" else self.data.target)

        fixed = {
            axis: {sgn: (rotation_y if axis == "y" else rotation_z)(sgn * _SHIFT) for sgn in (1, -1)}
            for axis in ("y", "z")
        }
        grad = np.zeros(self.model.n_params)
        for r, rot in enumerate(plan):
            shifted = []
            for sgn in (1, -1):
                psi = prefix[r] @ fixed[rot.axis][sgn].T
                shifted.append(readout(np.einsum("mij,mj->mi", suffix[r], psi), self.benchmark))
            d_pred = 0.5 * (shifted[0] - shifted[1])
            # d chi2 / d angle_r, per point
            d_point = 2.0 * np.real(np.conj(res) * d_pred) / M
            for k, coef in rot.grads:
                grad[k] += float(np.sum(coef * d_point))
        return grad
