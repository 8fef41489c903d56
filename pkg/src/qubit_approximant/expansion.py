"""
Exponential-series expansions of layered circuits.

A product of Fourier gates sharing one frequency ``w`` (after a leading gate
with ``w = 0``) has a first column whose entries are finite Fourier sums on the
lattice ``n |w|``, ``n = -N..N``.  :func:`fourier_expansion` builds those
coefficients gate by gate; :func:`uat_expansion` does the same for UAT gates,
where each gate splits every term into an ``e^{+i(w.x+a)}`` and an
``e^{-i(w.x+a)}`` branch.  :func:`series_eval` sums either table at given
inputs, so the tables can be checked against direct matrix products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .gates import FourierParams, UatParams


@dataclass(frozen=True)
class FourierTable:
    """Coefficients of ``<0|U|0> = sum A_n e^{i W_n x}`` and ``<1|U|0> = sum B_n e^{i W_n x}``.

    Index ``n`` runs over ``-N..N``; ``W_n`` are strictly increasing.
    """

    frequencies: np.ndarray
    B: np.ndarray
    A: np.ndarray | None = None

    def __post_init__(self):
        freqs = np.asarray(self.frequencies, dtype=float)
        B = np.asarray(self.B, dtype=complex)
        if freqs.ndim != 1 or freqs.size % 2 != 1 or B.shape != freqs.shape:
            raise ValueError("a Fourier table needs 2N+1 frequencies and matching coefficients")
        if np.any(np.diff(freqs) <= 0):
            raise ValueError("table frequencies must be strictly increasing")
        object.__setattr__(self, "frequencies", freqs)
        object.__setattr__(self, "B", B)
        if self.A is not None:
            object.__setattr__(self, "A", np.asarray(self.A, dtype=complex))

    @property
    def order(self) -> int:
        return (self.frequencies.size - 1) // 2

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.order, self.order + 1)


@dataclass(frozen=True)
class UatTable:
    """Terms ``c_m e^{i d_m} e^{i w_m . x}`` of ``<1|U|0>`` for a UAT circuit.

    ``signs[m]`` records which branch (``+1`` or ``-1``) each gate contributed,
    which fixes ``d_m = sum signs * alpha`` and ``w_m = sum signs * omega``.
    """

    signs: np.ndarray
    coef: np.ndarray
    delta: np.ndarray
    freq: np.ndarray


def _shift(arr: np.ndarray, s: int) -> np.ndarray:
    # arr is zero-padded at both ends, so the roll never wraps data
    return np.roll(arr, s)


def fourier_expansion(gates: Sequence[FourierParams]) -> FourierTable:
    """Expand a product of Fourier gates into its exponential series.

    The first gate must have ``omega = 0`` (the constant term); every later
    gate must share one nonzero ``omega``.  Gate ``i`` is applied after gate
    ``i - 1``.
    """
    gates = list(gates)
    if not gates:
        raise ValueError("at least one gate is required")
    if gates[0].omega != 0.0:
        raise ValueError("the first gate must have omega = 0")
    rest = {g.omega for g in gates[1:]}
    if len(rest) > 1:
        raise ValueError(f"gates after the first must share one frequency, got {sorted(rest)}")
    omega = rest.pop() if rest else 0.0
    if gates[1:] and omega == 0.0:
        raise ValueError("gates after the first need a nonzero common frequency")
    s = 1 if omega >= 0 else -1

    ap, am, bp, bm = gates[0].compact()
    A = np.array([ap + am], dtype=complex)
    B = np.array([-bm.conjugate() - bp.conjugate()], dtype=complex)
    for gate in gates[1:]:
        ap, am, bp, bm = gate.compact()
        A0, B0 = np.pad(A, 1), np.pad(B, 1)
        Au, Ad = _shift(A0, s), _shift(A0, -s)
        Bu, Bd = _shift(B0, s), _shift(B0, -s)
        A = ap * Au + am * Ad + bp * Bu + bm * Bd
        B = -bm.conjugate() * Au - bp.conjugate() * Ad + am.conjugate() * Bu + ap.conjugate() * Bd
    n = (A.size - 1) // 2
    unit = abs(omega) if n else 1.0
    return FourierTable(np.arange(-n, n + 1) * unit, B, A)


def uat_expansion(gates: Sequence[UatParams]) -> UatTable:
    """Expand ``<1| U_N ... U_1 |0>`` for UAT gates into exponential terms."""
    gates = list(gates)
    if not gates:
        raise ValueError("at least one gate is required")
    m = len(gates[0].omega)
    if any(len(g.omega) != m for g in gates):
        raise ValueError("all gates must have weights of the same dimension")

    # first column of the running product, keyed by branch sign pattern
    top: dict[tuple[int, ...], float] = {(): 1.0}
    bottom: dict[tuple[int, ...], float] = {}
    for g in gates:
        c, s = math.cos(g.phi), math.sin(g.phi)
        new_top: dict[tuple[int, ...], float] = {}
        new_bottom: dict[tuple[int, ...], float] = {}
        for pattern, val in top.items():
            new_top[pattern + (1,)] = new_top.get(pattern + (1,), 0.0) + c * val
            new_bottom[pattern + (-1,)] = new_bottom.get(pattern + (-1,), 0.0) + s * val
        for pattern, val in bottom.items():
            new_top[pattern + (1,)] = new_top.get(pattern + (1,), 0.0) - s * val
            new_bottom[pattern + (-1,)] = new_bottom.get(pattern + (-1,), 0.0) + c * val
        top, bottom = new_top, new_bottom

    patterns = sorted(bottom)
    signs = np.array(patterns, dtype=int).reshape(len(patterns), len(gates))
    alphas = np.array([g.alpha for g in gates])
    omegas = np.array([g.omega for g in gates]).reshape(len(gates), m)
    return UatTable(
        signs=signs,
        coef=np.array([bottom[p] for p in patterns]),
        delta=signs @ alphas,
        freq=signs @ omegas,
    )


def series_eval(table: FourierTable | UatTable, x):
    """Evaluate an expansion table at ``x`` (scalar, vector, or rows of points)."""
    if isinstance(table, FourierTable):
        xs = np.asarray(x, dtype=float)
        vals = np.exp(1j * np.multiply.outer(xs, table.frequencies)) @ table.B
        return complex(vals) if xs.ndim == 0 else vals
    X = np.asarray(x, dtype=float)
    m = table.freq.shape[1]
    single = X.ndim == 0 or (X.ndim == 1 and m > 1)
    X = X.reshape(-1, m)
    vals = np.exp(1j * (X @ table.freq.T + table.delta)) @ table.coef
    return complex(vals[0]) if single else vals
