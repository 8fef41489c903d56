"""
Classical comparators: truncated Fourier series and single-hidden-layer UAT models.

The Fourier baseline has no free parameters; its coefficients are quadrature
integrals over one period (the domain length).  The UAT baseline is
``sum a_n cos(w_n . x + b_n)`` for real targets and
``sum g_n e^{i d_n} e^{i u_n . x}`` for complex ones, trained with the same
chi-square, optimizer and multistart policy as the circuit models.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .encoding import Dataset, chi2_from_predictions
from .optimize import FitResult, minimize_es, minimize_qn, multistart
from .targets import TargetFunction, make_dataset

DEFAULT_RESOLUTION = 10_000


@dataclass(frozen=True)
class FourierSeries:
    period: float
    coefficients: np.ndarray  # c_{-N}, ..., c_N

    @property
    def order(self) -> int:
        return (len(self.coefficients) - 1) // 2

    def coefficient(self, n: int) -> complex:
        return complex(self.coefficients[n + self.order])


def fourier_fit(t: TargetFunction, N: int, resolution: int = DEFAULT_RESOLUTION) -> FourierSeries:
    """Coefficients ``c_n = (1/P) int z(x) e^{-2 pi i n x / P} dx`` for ``|n| <= N``.

    Composite trapezoid rule on ``resolution`` equally spaced points covering
    the domain, endpoints included.
    """
    if t.dim != 1:
        raise ValueError("Fourier series are only defined for one-dimensional targets")
    if N < 0:
        raise ValueError("N must be non-negative")
    if resolution < 2 * N + 2:
        raise ValueError(f"resolution {resolution} is too coarse for order {N} (need >= {2 * N + 2})")
    (lo, hi), = t.domain
    P = hi - lo
    x = np.linspace(lo, hi, resolution)
    z = np.asarray(t(x), dtype=complex)
    n = np.arange(-N, N + 1)
    integrand = z[np.newaxis, :] * np.exp(-2j * np.pi * np.outer(n, x) / P)
    coeffs = np.trapezoid(integrand, x, axis=1) / P
    return FourierSeries(period=P, coefficients=coeffs)


def fourier_eval(s: FourierSeries, x):
    """Partial sum ``sum c_n e^{2 pi i n x / P}``."""
    xs = np.asarray(x, dtype=float)
    n = np.arange(-s.order, s.order + 1)
    vals = np.exp(2j * np.pi * np.multiply.outer(xs, n) / s.period) @ s.coefficients
    return complex(vals) if xs.ndim == 0 else vals


@dataclass(frozen=True)
class UatModel:
    """Single-hidden-layer model with cosine (real) or ``e^{i.}`` (complex) activation.

    For ``kind == "real"``: ``weights`` are ``w_n``, ``bias`` are ``b_n`` and
    ``coef`` are ``a_n``.  For ``kind == "complex"``: ``weights`` are ``u_n``,
    ``bias`` are the phases ``d_n`` and ``coef`` the moduli ``g_n``.
    """

    kind: Literal["real", "complex"]
    weights: np.ndarray  # (N, m)
    bias: np.ndarray
    coef: np.ndarray

    @property
    def terms(self) -> int:
        return len(self.coef)

    @classmethod
    def from_flat(cls, kind: str, params, input_dim: int) -> "UatModel":
        rows = np.asarray(params, dtype=float).reshape(-1, input_dim + 2)
        return cls(kind, rows[:, :input_dim], rows[:, input_dim], rows[:, input_dim + 1])

    def flat(self) -> np.ndarray:
        return np.column_stack([self.weights, self.bias, self.coef]).ravel()


def classical_uat_eval(m: UatModel, x):
    """Evaluate the model at one point or at the rows of ``x``."""
    X = np.asarray(x, dtype=float)
    dim = m.weights.shape[1]
    single = X.ndim == 0 or (X.ndim == 1 and dim > 1)
    if single and X.size != dim:
        raise ValueError(f"input has dimension {X.size}, model weights have {dim}")
    if X.ndim < 2:
        X = X.reshape(-1, dim)
    if X.shape[1] != dim:
        raise ValueError(f"inputs have dimension {X.shape[1]}, model weights have {dim}")
    arg = X @ m.weights.T + m.bias
    if m.kind == "real":
        vals = np.cos(arg) @ m.coef
    else:
        vals = np.exp(1j * arg) @ m.coef
    if single:
        return complex(vals[0])
    return vals.astype(complex)


class ClassicalUatLoss:
    """Chi-square of a classical UAT model over flat parameters ``(w, b, coef)`` per term."""

    def __init__(self, terms: int, data: Dataset, benchmark: str = "Z"):
        if terms < 1:
            raise ValueError("need at least one term")
        data.check_for(benchmark)
        self.terms = terms
        self.data = data
        self.benchmark = benchmark
        self.kind = "real" if benchmark == "Z" else "complex"
        self.n_params = terms * (data.dim + 2)

    def model(self, params) -> UatModel:
        return UatModel.from_flat(self.kind, params, self.data.dim)

    def predict(self, params, X=None) -> np.ndarray:
        return classical_uat_eval(self.model(params), self.data.x if X is None else X)

    def __call__(self, params) -> float:
        return chi2_from_predictions(self.predict(params), self.data, self.benchmark)

    def gradient(self, params) -> np.ndarray:
        m = self.model(params)
        X = self.data.x
        M, dim = X.shape
        arg = X @ m.weights.T + m.bias  # (M, N)
        if self.kind == "real":
            res = np.cos(arg) @ m.coef - self.data.target.real
            d_coef = np.cos(arg)
            d_bias = -np.sin(arg) * m.coef
        else:
            res = np.exp(1j * arg) @ m.coef - self.data.target
            d_coef = np.exp(1j * arg)
            d_bias = 1j * d_coef * m.coef
        # d chi2 / d G_j pairs with dG/dtheta as 2 Re(conj(res) dG) / M
        w = 2.0 * np.conj(res)[:, np.newaxis] / M
        g_coef = np.real(np.sum(w * d_coef, axis=0))
        g_bias = np.real(np.sum(w * d_bias, axis=0))
        g_weights = np.real(np.einsum("mn,mn,md->nd", w, d_bias, X))
        return np.column_stack([g_weights, g_bias, g_coef]).ravel()


def classical_uat_fit(
    t: TargetFunction | Dataset,
    N: int,
    benchmark: str = "Z",
    restarts: int = 10,
    seed: int = 0,
    method: str = "lbfgs",
    **opt,
) -> tuple[UatModel, FitResult]:
    """Best-of-``restarts`` fit of an ``N``-term classical UAT model."""
    data = t if isinstance(t, Dataset) else make_dataset(t)
    loss = ClassicalUatLoss(N, data, benchmark)
    result = multistart(make_fitter(loss, method, **opt), loss.n_params, restarts, seed)
    return loss.model(result.best_params), result


def make_fitter(loss, method: str = "lbfgs", **opt):
    """``fit(p0, seed)`` closure for :func:`multistart`."""
    if method == "lbfgs":
        return lambda p0, _seed: minimize_qn(loss, p0, **opt)
    if method == "cma":
        return lambda p0, fit_seed: minimize_es(loss, p0, seed=fit_seed, **opt)
    raise ValueError(f"unknown optimizer {method!r}; use 'lbfgs' or 'cma'")
