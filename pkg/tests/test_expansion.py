import math

import numpy as np
import pytest

from qubit_approximant.expansion import FourierTable, UatTable, fourier_expansion, series_eval, uat_expansion
from qubit_approximant.gates import CircuitModel, FourierParams, UatParams, amplitudes_10


def random_fourier_params(rng, N):
    """Flat parameters for N+1 layers: the first at omega = 0, the rest sharing one omega."""
    p = rng.uniform(-math.pi, math.pi, size=(N + 1, 5))
    p[0, 0] = 0.0
    p[1:, 0] = rng.uniform(0.2, 3.0) * rng.choice([-1, 1])
    return p


def test_single_gate_table():
    rng = np.random.default_rng(3)
    w, a, b, phi, lam = rng.uniform(-3, 3, size=5)
    table = fourier_expansion([FourierParams(0.0, a, b, phi, lam)])
    assert table.order == 0
    expect = math.sin(lam) * math.cos(phi) * np.exp(-1j * b) + math.cos(lam) * math.sin(phi) * np.exp(-1j * a)
    assert abs(table.B[0] - expect) < 1e-14


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5])
def test_fourier_series_matches_product(rng, N):
    x = np.linspace(-1, 1, 50)
    model = CircuitModel("fourier", N + 1)
    for _ in range(20):
        p = random_fourier_params(rng, N)
        table = fourier_expansion([FourierParams(*row) for row in p])
        assert table.order == N
        err = np.abs(series_eval(table, x) - amplitudes_10(model, p.ravel(), x))
        assert err.max() < 1e-9


def test_fourier_table_bounded(rng):
    for N in range(1, 6):
        p = random_fourier_params(rng, N)
        table = fourier_expansion([FourierParams(*row) for row in p])
        assert np.sum(np.abs(table.B) ** 2) <= 1 + 1e-9


def test_zero_padding_layer_is_invariant(rng):
    p = random_fourier_params(rng, 2)
    x = np.linspace(-1, 1, 21)
    base = amplitudes_10(CircuitModel("fourier", 3), p.ravel(), x)
    padded = np.vstack([p, np.zeros(5)])
    np.testing.assert_allclose(amplitudes_10(CircuitModel("fourier", 4), padded.ravel(), x), base, atol=1e-13)


def test_fourier_expansion_rejects_mixed_frequencies():
    g0 = FourierParams(0, 0.1, 0.2, 0.3, 0.4)
    with pytest.raises(ValueError):
        fourier_expansion([FourierParams(1, 0, 0, 0, 0), g0])
    with pytest.raises(ValueError):
        fourier_expansion([g0, FourierParams(1, 0, 0, 0.1, 0), FourierParams(2, 0, 0, 0.1, 0)])
    with pytest.raises(ValueError):
        fourier_expansion([])


@pytest.mark.parametrize("m", [1, 2])
@pytest.mark.parametrize("N", [1, 2, 3, 4, 5])
def test_uat_series_matches_product(rng, N, m):
    model = CircuitModel("uat", N, m)
    X = rng.uniform(-1, 1, size=(50, m))
    for _ in range(20):
        p = rng.uniform(-math.pi, math.pi, size=model.n_params)
        table = uat_expansion(model.layer_gates(p))
        assert len(table.coef) == 2 ** (N - 1)
        err = np.abs(series_eval(table, X) - amplitudes_10(model, p, X))
        assert err.max() < 1e-9


def test_series_eval_examples(rng):
    x = np.linspace(-2, 2, 9)
    const = FourierTable([0.0], [1.0])
    np.testing.assert_allclose(series_eval(const, x), np.ones_like(x))
    w = 1.7
    cos_table = FourierTable([-w, 0.0, w], [0.5, 0.0, 0.5])
    np.testing.assert_allclose(series_eval(cos_table, x), np.cos(w * x), atol=1e-15)
    B = rng.normal(size=5) + 1j * rng.normal(size=5)
    assert abs(series_eval(FourierTable(np.arange(-2, 3) * 0.9, B), 0.0) - B.sum()) < 1e-14


def test_fourier_table_shape_checks():
    with pytest.raises(ValueError):
        FourierTable([0.0, 1.0], [1.0, 0.0])
    with pytest.raises(ValueError):
        FourierTable([1.0, 0.0, 2.0], [1.0, 0.0, 0.0])


def test_uat_table_single_gate():
    table = uat_expansion([UatParams((0.5,), 0.3, 0.7)])
    assert isinstance(table, UatTable)
    np.testing.assert_array_equal(table.signs, [[-1]])
    assert table.coef[0] == pytest.approx(math.sin(0.7))
