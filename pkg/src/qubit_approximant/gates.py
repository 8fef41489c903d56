"""
Fundamental re-uploading gates and layered circuits.

Two gate families are supported:

* ``fourier``: ``Rz(a+b) Ry(2 lam) Rz(a-b) Rz(2 w x) Ry(2 phi)`` with layer
  parameters ``(w, a, b, phi, lam)``; one-dimensional input only.
* ``uat``: ``Rz(2 (w.x + a)) Ry(2 phi)`` with layer parameters
  ``(w_1, ..., w_m, a, phi)``.

A circuit of ``k`` layers applies layer 1 first, i.e. its unitary is
``U_k ... U_2 U_1``.  Parameters live in one flat float array, layer-major.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .linalg import (
    IDENTITY,
    KET_0,
    KET_PLUS,
    apply_rotation_batch,
    rotation_y,
    rotation_z,
)

Family = Literal["fourier", "uat"]
FAMILIES = ("fourier", "uat")
INITIAL_STATES = {"0": KET_0, "+": KET_PLUS}


def _finite(values, what: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} must be finite, got {values!r}")
    return arr


@dataclass(frozen=True)
class FourierParams:
    omega: float
    alpha: float
    beta: float
    phi: float
    lam: float

    def __post_init__(self):
        _finite([self.omega, self.alpha, self.beta, self.phi, self.lam], "Fourier gate parameters")

    def compact(self) -> tuple[complex, complex, complex, complex]:
        """Return ``(a_plus, a_minus, b_plus, b_minus)`` of the compact gate form.

        The gate equals ``[[a, b], [-conj(b), conj(a)]]`` with
        ``a(x) = a_plus e^{iwx} + a_minus e^{-iwx}`` and
        ``b(x) = b_plus e^{iwx} + b_minus e^{-iwx}``.
        """
        cl, sl = math.cos(self.lam), math.sin(self.lam)
        cp, sp = math.cos(self.phi), math.sin(self.phi)
        ea = complex(math.cos(self.alpha), math.sin(self.alpha))
        eb = complex(math.cos(self.beta), math.sin(self.beta))
        return cl * cp * ea, -sl * sp * eb, -cl * sp * ea, -sl * cp * eb


@dataclass(frozen=True)
class UatParams:
    omega: tuple[float, ...]
    alpha: float
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "omega", tuple(float(w) for w in np.atleast_1d(self.omega)))
        _finite(list(self.omega) + [self.alpha, self.phi], "UAT gate parameters")


def build_fourier_gate(x: float, p: FourierParams) -> np.ndarray:
    """Unitary of one Fourier gate at input ``x``."""
    x = float(_finite(x, "input")[0])
    return (
        rotation_z(p.alpha + p.beta)
        @ rotation_y(2 * p.lam)
        @ rotation_z(p.alpha - p.beta)
        @ rotation_z(2 * p.omega * x)
        @ rotation_y(2 * p.phi)
    )


def build_uat_gate(x, p: UatParams) -> np.ndarray:
    """Unitary of one UAT gate at input vector ``x``."""
    x = _finite(x, "input")
    if x.shape != (len(p.omega),):
        raise ValueError(f"input has dimension {x.size}, gate weights have {len(p.omega)}")
    arg = float(np.dot(p.omega, x)) + p.alpha
    return rotation_z(2 * arg) @ rotation_y(2 * p.phi)


@dataclass(frozen=True)
class CircuitModel:
    """Gate family, depth, input dimension and initial state of a circuit.

    ``initial_state`` defaults to ``"0"`` for the Fourier family and ``"+"``
    for the UAT family.
    """

    family: Family
    layers: int
    input_dim: int = 1
    initial_state: str | None = field(default=None)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown gate family {self.family!r}")
        if int(self.layers) != self.layers or self.layers < 1:
            raise ValueError(f"layers must be a positive integer, got {self.layers!r}")
        if int(self.input_dim) != self.input_dim or self.input_dim < 1:
            raise ValueError(f"input_dim must be a positive integer, got {self.input_dim!r}")
        if self.family == "fourier" and self.input_dim != 1:
            raise ValueError("the Fourier gate family only supports one-dimensional input")
        if self.initial_state is None:
            object.__setattr__(self, "initial_state", "0" if self.family == "fourier" else "+")
        if self.initial_state not in INITIAL_STATES:
            raise ValueError(f"initial_state must be '0' or '+', got {self.initial_state!r}")

    @property
    def params_per_layer(self) -> int:
        return 5 if self.family == "fourier" else self.input_dim + 2

    @property
    def n_params(self) -> int:
        return self.layers * self.params_per_layer

    @property
    def initial(self) -> np.ndarray:
        return INITIAL_STATES[self.initial_state]

    def check_params(self, params) -> np.ndarray:
        params = np.asarray(params, dtype=float)
        if params.shape != (self.n_params,):
            raise ValueError(
                f"{self.family} model with {self.layers} layers needs {self.n_params} "
                f"parameters, got shape {params.shape}"
            )
        if not np.all(np.isfinite(params)):
            raise ValueError("parameters must be finite")
        return params

    def check_inputs(self, X) -> np.ndarray:
        """Coerce inputs to shape ``(M, input_dim)``."""
        X = np.asarray(X, dtype=float)
        if X.ndim == 0:
            X = X.reshape(1, 1)
        elif X.ndim == 1:
            X = X.reshape(-1, 1) if self.input_dim == 1 else X.reshape(1, -1)
        if X.ndim != 2 or X.shape[1] != self.input_dim:
            raise ValueError(f"inputs must have dimension {self.input_dim}, got shape {X.shape}")
        if not np.all(np.isfinite(X)):
            raise ValueError("inputs must be finite")
        return X

    def layer_gates(self, params) -> list[FourierParams] | list[UatParams]:
        rows = self.check_params(params).reshape(self.layers, self.params_per_layer)
        if self.family == "fourier":
            return [FourierParams(*row) for row in rows]
        m = self.input_dim
        return [UatParams(tuple(row[:m]), row[m], row[m + 1]) for row in rows]


def circuit_unitary(model: CircuitModel, params, x) -> np.ndarray:
    """Ordered product of the model's gates at a single input point."""
    x = model.check_inputs(x)
    if x.shape[0] != 1:
        raise ValueError("circuit_unitary takes a single input point")
    x = x[0]
    u = IDENTITY.copy()
    for gate in model.layer_gates(params):
        if model.family == "fourier":
            u = build_fourier_gate(x[0], gate) @ u
        else:
            u = build_uat_gate(x, gate) @ u
    return u


def amplitude_10(model: CircuitModel, params, x) -> complex:
    """``<1|U|0>`` of the circuit, independent of the model's initial state."""
    return complex(circuit_unitary(model, params, x)[1, 0])


# Rotation plan: the circuit as a time-ordered list of single-axis rotations,
# each with the derivative of its angle w.r.t. the flat parameters.

@dataclass
class Rotation:
    axis: str
    angle: np.ndarray
    # (parameter index, d angle / d parameter); the derivative is a scalar or
    # an array over grid points
    grads: list[tuple[int, float | np.ndarray]]


def rotation_plan(model: CircuitModel, params, X) -> list[Rotation]:
    params = model.check_params(params)
    X = model.check_inputs(X)
    M = X.shape[0]
    ones = np.ones(M)
    plan: list[Rotation] = []
    step = model.params_per_layer
    for layer in range(model.layers):
        k = layer * step
        if model.family == "fourier":
            w, a, b, phi, lam = params[k:k + 5]
            x = X[:, 0]
            plan += [
                Rotation("y", 2 * phi * ones, [(k + 3, 2.0)]),
                Rotation("z", 2 * w * x, [(k, 2 * x)]),
                Rotation("z", (a - b) * ones, [(k + 1, 1.0), (k + 2, -1.0)]),
                Rotation("y", 2 * lam * ones, [(k + 4, 2.0)]),
                Rotation("z", (a + b) * ones, [(k + 1, 1.0), (k + 2, 1.0)]),
            ]
        else:
            m = model.input_dim
            w, a, phi = params[k:k + m], params[k + m], params[k + m + 1]
            plan += [
                Rotation("y", 2 * phi * ones, [(k + m + 1, 2.0)]),
                Rotation(
                    "z",
                    2 * (X @ w + a),
                    [(k + j, 2 * X[:, j]) for j in range(m)] + [(k + m, 2.0)],
                ),
            ]
    return plan


def final_states(model: CircuitModel, params, X, initial: np.ndarray | None = None) -> np.ndarray:
    """Output states, shape ``(M, 2)``, for every input row of ``X``."""
    plan = rotation_plan(model, params, X)
    init = model.initial if initial is None else np.asarray(initial, dtype=complex)
    states = np.tile(init, (plan[0].angle.shape[0], 1))
    for rot in plan:
        states = apply_rotation_batch(rot.axis, rot.angle, states)
    return states


def amplitudes_10(model: CircuitModel, params, X: Sequence) -> np.ndarray:
    """Batched ``<1|U|0>`` over the rows of ``X``."""
    return final_states(model, params, X, initial=KET_0)[:, 1]
