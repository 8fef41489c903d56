import numpy as np
import pytest

from qubit_approximant.targets import (
    SCAN_POINTS_1D,
    eval_1d,
    eval_2d,
    get_target,
    grid,
    load_table,
    make_complex,
    make_dataset,
    normalize,
)


def test_1d_values():
    assert eval_1d("relu", -0.5) == 0.0
    assert eval_1d("relu", 0.7) == pytest.approx(0.7)
    assert eval_1d("step", 0.0) == 0.0
    assert eval_1d("step", -0.2) == -1.0
    assert eval_1d("poly", 1.0) == 0.0
    assert eval_1d("poly", -1.0) == 0.0
    with pytest.raises(ValueError):
        eval_1d("sinc", 0.1)


def test_2d_values():
    assert eval_2d("himmelblau", 3.0, 2.0) == 0.0
    assert eval_2d("threehump", 0.0, 0.0) == 0.0
    assert eval_2d("adjiman", 0.0, 0.0) == 0.0
    with pytest.raises(ValueError):
        eval_2d("relu", 0.0, 0.0)


def test_symmetries():
    x = np.linspace(-1, 1, 201)
    np.testing.assert_allclose(eval_1d("step", -x), -eval_1d("step", x))
    np.testing.assert_allclose(eval_1d("tanh5", -x), -eval_1d("tanh5", x))
    np.testing.assert_allclose(eval_1d("poly", -x), eval_1d("poly", x))


def test_normalize_tanh5_is_nearly_unscaled():
    t = get_target("tanh5")
    assert t.scale == pytest.approx(np.tanh(5.0), abs=1e-12)
    assert abs(t.scale - 1) < 1e-4


def test_normalize_poly_divides_by_scan_max():
    x = np.linspace(-1, 1, SCAN_POINTS_1D)
    peak = np.max(eval_1d("poly", x))
    assert peak < 1
    t = get_target("poly")
    assert t.scale == peak
    assert np.max(np.abs(t(x))) == pytest.approx(1.0, abs=1e-15)


def test_normalize_himmelblau_range():
    t = get_target("himmelblau")
    X, _ = grid(t.domain, 101)
    vals = t(X)
    assert vals.min() >= -1 and vals.max() <= 1 + 1e-15
    assert vals.max() == pytest.approx(1.0)


def test_normalize_idempotent_and_sign_preserving():
    for name in ("relu", "tanh5", "step", "poly", "brent", "adjiman", "threehump"):
        t = get_target(name)
        again = normalize(t)
        assert again.scale == t.scale
        X, _ = grid(t.domain, 101 if t.dim == 1 else 21)
        np.testing.assert_array_equal(np.sign(t(X).real), np.sign(t.raw(X).real))


def test_all_zero_target_keeps_scale_one():
    t = make_complex("relu", "relu", points=np.linspace(-1, 0, 11))
    assert t.scale == 1.0
    assert t(np.array([-1.0]))[0] == 0


def test_complex_target():
    t = make_complex("tanh5", "relu")
    x = np.linspace(-1, 1, SCAN_POINTS_1D)
    z = t(x)
    assert np.max(np.abs(z)) == pytest.approx(1.0)
    np.testing.assert_allclose(z * t.scale, np.tanh(5 * x) + 1j * np.maximum(0, x))
    assert get_target("tanh5+i*relu").scale == t.scale
    with pytest.raises(ValueError):
        make_complex("tanh5", "himmelblau")


def test_make_dataset_grids():
    d = make_dataset(get_target("relu"), 3)
    np.testing.assert_allclose(d.x[:, 0], [-1, 0, 1])
    d2 = make_dataset(get_target("himmelblau"), 3)
    assert len(d2) == 9 and d2.grid_shape == (3, 3)
    d3 = make_dataset(get_target("relu"))
    assert len(d3) == 101 and d3.is_real and np.all(np.abs(d3.target) <= 1)
    assert len(make_dataset(get_target("adjiman"))) == 31 * 31


def test_grid_rejects_single_point():
    with pytest.raises(ValueError):
        grid(((-1.0, 1.0),), 1)


def test_unknown_target():
    with pytest.raises(ValueError):
        get_target("nope")


def test_load_table(tmp_path):
    p = tmp_path / "wave.csv"
    x = np.linspace(-2, 2, 9)
    rows = "\n".join(f"{a},{2 * np.sin(a)},{np.cos(a)}" for a in x)
    p.write_text("x,value,imag\n" + rows + "\n")
    d = load_table(p)
    assert d.name == "wave" and d.meta["kind"] == "complex"
    assert d.domain == ((-2.0, 2.0),)
    assert np.max(np.abs(d.target)) == pytest.approx(1.0)
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        load_table(bad)
