import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import nsrps_reference
from tscause.ccc import CccParams, cc_joint, cc_self, ccc_pair
from tscause.errors import LengthMismatch, TooShort
from tscause.surrogate import SurrogateSpec, add_one_p_value, make_surrogate
from tscause.symbolic import SymbolSequence, pair_code, symbolize


def test_cc_self_examples():
    assert cc_self([2, 2], [2, 2, 2]) == 0
    expected = nsrps_reference([1, 2, 1, 2, 1, 2]) - nsrps_reference([1, 2, 1, 2])
    assert cc_self([1, 2], [1, 2, 1, 2]) == expected == 0


@given(st.lists(st.integers(0, 3), min_size=1, max_size=40),
       st.lists(st.integers(0, 3), min_size=1, max_size=40))
def test_cc_self_integer_and_oracle(dy, yp):
    v = cc_self(SymbolSequence(dy, 4), SymbolSequence(yp, 4))
    assert isinstance(v, int)
    assert v == nsrps_reference(yp + dy) - nsrps_reference(yp)


@given(st.lists(st.integers(0, 3), min_size=1, max_size=30), st.data())
def test_cc_joint_identical_past_equals_self(dy, data):
    yp = data.draw(st.lists(st.integers(0, 3), min_size=1, max_size=30))
    y = SymbolSequence(yp, 4)
    d = SymbolSequence(dy, 4)
    assert cc_joint(d, y, y) == cc_self(d, y)
    xp = data.draw(st.lists(st.integers(0, 3), min_size=len(yp), max_size=len(yp)))
    x = SymbolSequence(xp, 4)
    full = pair_code(yp + dy, xp + dy, 4)
    expected = nsrps_reference(full) - nsrps_reference(pair_code(yp, xp, 4))
    assert cc_joint(d, y, x) == expected


def test_cc_joint_constant_and_mismatch():
    assert cc_joint([1, 1], [1, 1, 1], [1, 1, 1]) == 0
    with pytest.raises(LengthMismatch):
        cc_joint([1], [1, 2], [1])


def ccc_reference(x, y, p):
    """Window loop written out with the plain-Python ETC."""
    xs, ys = symbolize(x, p.bins).symbols, symbolize(y, p.bins).symbols
    vals = []
    for t in range(0, len(ys) - p.L - p.w + 1, p.delta):
        yp, xp, dy = ys[t:t + p.L], xs[t:t + p.L], ys[t + p.L:t + p.L + p.w]
        self_cc = nsrps_reference(np.r_[yp, dy]) - nsrps_reference(yp)
        joint = (nsrps_reference(pair_code(np.r_[yp, dy], np.r_[xp, dy], p.bins))
                 - nsrps_reference(pair_code(yp, xp, p.bins)))
        vals.append(self_cc - joint)
    return np.array(vals)


def test_ccc_pair_matches_reference_loop():
    rng = np.random.default_rng(7)
    x, y = rng.random(400), rng.random(400)
    p = CccParams(L=40, w=10, delta=25, bins=3)
    r = ccc_pair(x, y, p)
    np.testing.assert_array_equal(r.window_values, ccc_reference(x, y, p))
    assert r.n_windows == (400 - 40 - 10) // 25 + 1


@given(st.integers(0, 10_000), st.integers(60, 400), st.integers(2, 50),
       st.integers(1, 20), st.integers(1, 60), st.integers(2, 6))
@settings(max_examples=50, deadline=None)
def test_self_null_window_count_and_mean(seed, n, L, w, delta, bins):
    if n < L + w:
        return
    y = np.random.default_rng(seed).normal(size=n)
    p = CccParams(L, w, delta, bins)
    r = ccc_pair(y, y, p)
    assert np.all(r.window_values == 0) and r.ccc == 0
    x = np.random.default_rng(seed + 1).normal(size=n)
    r = ccc_pair(x, y, p)
    assert r.n_windows == (n - L - w) // delta + 1 == len(r.window_values)
    assert abs(r.ccc - np.mean(r.window_values)) <= 1e-12


def test_ccc_errors():
    with pytest.raises(TooShort):
        ccc_pair(np.arange(50.0), np.arange(50.0)[::-1], CccParams(L=40, w=15))
    with pytest.raises(LengthMismatch):
        ccc_pair(np.arange(200.0), np.arange(199.0))
    with pytest.raises(ValueError):
        CccParams(L=1)


def test_iid_null_mean_below_surrogate_percentile():
    n, trials, reps = 1000, 100, 19
    data = [np.random.default_rng(s).random((2, n)) for s in range(trials)]
    observed = np.mean([abs(ccc_pair(x, y).ccc) for x, y in data])
    null = []
    for r in range(reps):
        spec = SurrogateSpec("shuffle", 19, 1000 + r)
        null.append(np.mean([abs(ccc_pair(make_surrogate(x, spec, t), y).ccc)
                             for t, (x, y) in enumerate(data)]))
    # below the null's upper 5% tail, judged with the add-one permutation rule
    assert add_one_p_value(observed, null) > 0.05
