"""
Single-qubit state-vector arithmetic.

States are complex numpy arrays of shape ``(2,)`` and unitaries complex arrays
of shape ``(2, 2)``.  Batched variants with a leading grid axis (``(M, 2)`` and
``(M, 2, 2)``) are used by the circuit code; the scalar helpers here are the
reference definitions.

Rotation convention::

    Ry(t) = [[cos(t/2), -sin(t/2)],
             [sin(t/2),  cos(t/2)]]
    Rz(t) = diag(exp(+i t/2), exp(-i t/2))

The sign of ``Rz`` is fixed so that the five-rotation Fourier gate expands to
the explicit matrix used by the coefficient recursion in
:mod:`qubit_approximant.expansion`.
"""

from __future__ import annotations

import math

import numpy as np

EXACT_TOL = 1e-10
INPUT_TOL = 1e-6

OBSERVABLES = ("X", "Y", "Z")

KET_0 = np.array([1.0, 0.0], dtype=complex)
KET_1 = np.array([0.0, 1.0], dtype=complex)
KET_PLUS = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)
IDENTITY = np.eye(2, dtype=complex)


def _check_angle(theta: float) -> float:
    theta = float(theta)
    if not math.isfinite(theta):
        raise ValueError(f"rotation angle must be finite, got {theta!r}")
    return theta


def rotation_y(theta: float) -> np.ndarray:
    """Rotation about the Y axis by ``theta`` radians."""
    theta = _check_angle(theta)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rotation_z(theta: float) -> np.ndarray:
    """Rotation about the Z axis, ``diag(e^{i theta/2}, e^{-i theta/2})``."""
    theta = _check_angle(theta)
    ph = complex(math.cos(theta / 2), math.sin(theta / 2))
    return np.array([[ph, 0], [0, ph.conjugate()]], dtype=complex)


def is_unitary(u: np.ndarray, tol: float = EXACT_TOL) -> bool:
    u = np.asarray(u)
    return bool(np.max(np.abs(u.conj().T @ u - IDENTITY)) < tol)


def apply(u: np.ndarray, state: np.ndarray) -> np.ndarray:
    """Return ``u @ state``."""
    u = np.asarray(u, dtype=complex)
    state = np.asarray(state, dtype=complex)
    if u.shape != (2, 2) or state.shape != (2,):
        raise ValueError(f"expected (2, 2) @ (2,), got {u.shape} @ {state.shape}")
    if not is_unitary(u, INPUT_TOL):
        raise ValueError("matrix is not unitary")
    return u @ state


def expectation(state: np.ndarray, obs: str) -> float:
    """Expectation value of a Pauli observable on a normalized state."""
    state = np.asarray(state, dtype=complex)
    norm = float(np.vdot(state, state).real)
    if abs(norm - 1.0) > INPUT_TOL:
        raise ValueError(f"state is not normalized (norm^2 = {norm})")
    return float(pauli_expectations(state[np.newaxis, :], obs)[0])


def pauli_expectations(states: np.ndarray, obs: str) -> np.ndarray:
    """Batched Pauli expectations for states of shape ``(M, 2)``."""
    a0, a1 = states[..., 0], states[..., 1]
    if obs == "Z":
        return np.abs(a0) ** 2 - np.abs(a1) ** 2
    cross = a0.conj() * a1
    if obs == "X":
        return 2.0 * cross.real
    if obs == "Y":
        return 2.0 * cross.imag
    raise ValueError(f"unknown observable {obs!r}; expected one of {OBSERVABLES}")


# Batched constructors: ``theta`` has shape (M,), result (M, 2, 2).

def rotation_y_batch(theta: np.ndarray) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    out = np.empty(theta.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = c
    out[..., 0, 1] = -s
    out[..., 1, 0] = s
    out[..., 1, 1] = c
    return out


def rotation_z_batch(theta: np.ndarray) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    ph = np.exp(0.5j * theta)
    out = np.zeros(theta.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = ph
    out[..., 1, 1] = ph.conj()
    return out


def apply_rotation_batch(axis: str, theta: np.ndarray, states: np.ndarray) -> np.ndarray:
    """Apply ``R_axis(theta_j)`` to ``states[j]`` without building matrices."""
    a0, a1 = states[:, 0], states[:, 1]
    out = np.empty_like(states)
    if axis == "z":
        ph = np.exp(0.5j * theta)
        out[:, 0] = ph * a0
        out[:, 1] = ph.conj() * a1
    else:
        c, s = np.cos(theta / 2), np.sin(theta / 2)
        out[:, 0] = c * a0 - s * a1
        out[:, 1] = s * a0 + c * a1
    return out
