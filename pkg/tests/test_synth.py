import numpy as np
import pytest

from tscause.core import pearson_correlation, stationarity_check
from tscause.errors import Diverged, TooShort, Unstable
from tscause.synth import gen_confounded, gen_coupled_ar, gen_coupled_maps, gen_lagged_copy, skew_tent


def test_coupled_ar_truth_and_determinism():
    assert gen_coupled_ar(200, c=0.0).truth == ()
    ds = gen_coupled_ar(200, c=0.8, seed=3)
    assert ds.has_edge("x", "y") and not ds.has_edge("y", "x")
    again = gen_coupled_ar(200, c=0.8, seed=3)
    assert all(np.array_equal(a.values, b.values) for a, b in zip(ds.series, again.series))
    other = gen_coupled_ar(200, c=0.8, seed=4)
    assert not np.array_equal(ds["x"].values, other["x"].values)
    assert other.names == ds.names and other.truth == ds.truth


def test_coupled_ar_errors():
    with pytest.raises(Unstable):
        gen_coupled_ar(200, a_x=1.0)
    with pytest.raises(TooShort):
        gen_coupled_ar(50)


def test_coupled_ar_passes_stationarity_screen():
    passed = 0
    for seed in range(200):
        ds = gen_coupled_ar(2000, seed=seed)
        passed += stationarity_check(ds["x"]).passed and stationarity_check(ds["y"]).passed
    assert passed / 200 > 0.95


def test_maps_bounded_deterministic_and_truth():
    ds = gen_coupled_maps(1000, c_xy=0.4, c_yx=0.0, seed=1)
    for s in ds.series:
        assert len(s) == 1000 and s.values.min() >= 0 and s.values.max() <= 1
    assert ds.has_edge("x", "y") and not ds.has_edge("y", "x")
    assert np.array_equal(ds["y"].values, gen_coupled_maps(1000, 0.4, 0.0, seed=1)["y"].values)
    assert gen_coupled_maps(200, 0.0, 0.0).truth == ()


def test_maps_diverged_on_bad_parameters():
    with pytest.raises(Diverged):
        gen_coupled_maps(200, c_xy=np.inf)


def test_skew_tent():
    assert skew_tent(np.array([0.0, 0.65, 1.0])).tolist() == [0.0, 1.0, 0.0]


def test_confounded_correlation_without_edge():
    ds = gen_confounded(2000, 0, 0, noise_sd=0.1, seed=0)
    assert pearson_correlation(ds["x"], ds["y"]).rho > 0.9
    assert not ds.has_edge("x", "y") and not ds.has_edge("y", "x")
    assert ds.has_edge("z", "x") and ds.has_edge("z", "y")
    assert np.array_equal(ds["x"].values, gen_confounded(2000, 0, 0, 0.1, seed=0)["x"].values)


def test_confounded_lags():
    ds = gen_confounded(500, lag_x=3, lag_y=0, noise_sd=0.0, seed=2)
    np.testing.assert_array_equal(ds["x"].values[3:], ds["z"].values[:-3])


def test_downsample():
    full = gen_coupled_ar(300, seed=1)
    coarse = gen_coupled_ar(300, seed=1, downsample=3)
    assert len(coarse["x"]) == 300
    assert not np.array_equal(full["x"].values, coarse["x"].values)


def test_lagged_copy():
    ds = gen_lagged_copy(100, seed=0)
    assert np.array_equal(ds["i"].values[1:], ds["j"].values[:-1])
