"""Exit criteria. Each test prints one PASS/FAIL line (collected again in
the terminal summary) and then asserts the criterion, runtime included.
Monte-Carlo criteria use seeds 0..99 (or 0..499)."""

import hashlib
import time

import numpy as np
import pytest
from scipy import stats

from oracles import knn_exhaustive, ols_normal_equations
from tscause.ccc import CccParams, ccc_pair
from tscause.ccm import ccm_convergence, nearest_neighbors
from tscause.cli import main
from tscause.core import pearson_correlation
from tscause.gc import gc_test, granger_f, ols
from tscause.surrogate import SurrogateSpec, add_one_p_value, make_surrogate, significance_test
from tscause.symbolic import SymbolSequence, etc
from tscause.synth import gen_confounded, gen_coupled_ar, gen_coupled_maps, gen_lagged_copy
from tscause.te import TeConfig, transfer_entropy, transfer_entropy_entropies

SEEDS = range(100)


def test_c1_estimator_oracles(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    ols_err = 0.0
    for _ in range(1000):
        n, k = int(rng.integers(8, 51)), int(rng.integers(1, 5))
        design, target = rng.normal(size=(n, k)), rng.normal(size=n)
        beta, _ = ols(design, target)
        ols_err = max(ols_err, np.max(np.abs(beta - ols_normal_equations(design, target))))
    te_err = 0.0
    for _ in range(1000):
        b, n = int(rng.integers(2, 5)), int(rng.integers(5, 400))
        i, j = SymbolSequence(rng.integers(0, b, n), b), SymbolSequence(rng.integers(0, b, n), b)
        cfg = TeConfig(1, 1, b)
        te_err = max(te_err, abs(transfer_entropy(i, j, cfg).te_bits
                                 - transfer_entropy_entropies(i, j, cfg)))
    knn_mismatch = 0
    for _ in range(200):
        n, E = int(rng.integers(6, 201)), int(rng.integers(1, 5))
        pts = rng.normal(size=(n, E))
        times = np.arange(n)
        lib = np.sort(rng.choice(n, size=int(rng.integers(E + 2, n + 1)), replace=False))
        queries = rng.normal(size=(5, E))
        _, nb = nearest_neighbors(pts[lib], times[lib], queries, E + 1)
        for q in range(5):
            knn_mismatch += nb[q].tolist() != knn_exhaustive(pts[lib], times[lib], queries[q], E + 1)[0]
    elapsed = time.perf_counter() - t0
    ok = ols_err <= 1e-8 and te_err <= 1e-10 and knn_mismatch == 0 and elapsed < 10
    report("C1 estimator oracles", ok,
           f"OLS max err {ols_err:.2e} (<=1e-8), TE identity max err {te_err:.2e} (<=1e-10), "
           f"kNN mismatches {knn_mismatch} (=0), {elapsed:.1f}s (<10s)")
    assert ok


def test_c2_exact_nulls(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2)
    min_f = np.inf
    for _ in range(1000):
        p = int(rng.integers(1, 4))
        n = int(rng.integers(3 * p + 5, 400))
        y, x = rng.normal(size=n), rng.normal(size=n)
        if rng.random() < 0.3:
            x = rng.permutation(y)
        min_f = min(min_f, granger_f(y, x, p).f_stat)
    min_te = np.inf
    for _ in range(1000):
        b, n = int(rng.integers(2, 5)), int(rng.integers(5, 300))
        k, l = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        if n <= max(k, l) + 1:
            continue
        i, j = SymbolSequence(rng.integers(0, b, n), b), SymbolSequence(rng.integers(0, b, n), b)
        min_te = min(min_te, transfer_entropy(i, j, TeConfig(k, l, b)).te_bits)
    max_ccc = 0.0
    for _ in range(100):
        n = int(rng.integers(200, 1500))
        params = CccParams(int(rng.integers(2, 120)), int(rng.integers(1, 30)),
                           int(rng.integers(1, 60)), int(rng.integers(2, 8)))
        y = rng.normal(size=n)
        r = ccc_pair(y, y, params)
        max_ccc = max(max_ccc, np.max(np.abs(r.window_values)), abs(r.ccc))
    etc_const = max(etc([c] * int(rng.integers(1, 500))).iterations for c in range(20))
    elapsed = time.perf_counter() - t0
    ok = min_f >= -1e-12 and min_te >= -1e-12 and max_ccc == 0 and etc_const == 0 and elapsed < 30
    report("C2 exact nulls", ok,
           f"min GC F {min_f:.2e}, min TE {min_te:.2e} (>= -1e-12), max |CCC(y,y)| {max_ccc} (=0), "
           f"max ETC(const) {etc_const} (=0), {elapsed:.1f}s (<30s)")
    assert ok


def test_c3_gc_detection(report):
    t0 = time.perf_counter()
    tp = fp = 0
    for seed in SEEDS:
        ds = gen_coupled_ar(2000, c=0.8, a_x=0.5, a_y=0.5, noise_sd=1.0, seed=seed)
        tp += gc_test(ds["y"], ds["x"], p=1, alpha=0.01).significant
        fp += gc_test(ds["x"], ds["y"], p=1, alpha=0.01).significant
    elapsed = time.perf_counter() - t0
    ok = tp / 100 >= 0.99 and fp / 100 <= 0.05 and elapsed < 20
    report("C3 GC detection", ok,
           f"TPR {tp / 100:.2f} (>=0.99), reverse FPR {fp / 100:.2f} (<=0.05), {elapsed:.1f}s (<20s)")
    assert ok


def test_c4_gc_null_calibration(report):
    t0 = time.perf_counter()
    p_values, false_pos = [], 0
    for seed in range(500):
        rng = np.random.default_rng(seed)
        x, y = rng.normal(size=2000), rng.normal(size=2000)
        p_values.append(granger_f(y, x, 1).p_value)
        r = significance_test(lambda s, t: granger_f(t, s, 1).f_stat, x, y,
                              SurrogateSpec("shuffle", 99, seed), alpha=0.05)
        false_pos += r.significant
    ks = stats.kstest(p_values, "uniform").statistic
    elapsed = time.perf_counter() - t0
    ok = ks < 0.08 and false_pos / 500 <= 0.05 + 0.03 and elapsed < 120
    report("C4 GC null calibration", ok,
           f"KS {ks:.4f} (<0.08), surrogate FPR {false_pos / 500:.3f} (<=0.08), {elapsed:.1f}s (<120s)")
    assert ok


def test_c5_te_directionality(report):
    t0 = time.perf_counter()
    ds = gen_lagged_copy(10000, seed=0)
    i = SymbolSequence(ds["i"].values.astype(int), 2)
    j = SymbolSequence(ds["j"].values.astype(int), 2)
    fwd = transfer_entropy(i, j, TeConfig(1, 1, 2)).te_bits
    rev = transfer_entropy(j, i, TeConfig(1, 1, 2)).te_bits
    elapsed = time.perf_counter() - t0
    ok = abs(fwd - 1.0) <= 0.02 and rev < 0.1 and elapsed < 5
    report("C5 TE directionality", ok,
           f"TE(j->i) {fwd:.4f} (1.0+-0.02), TE(i->j) {rev:.4f} (<0.1), {elapsed:.2f}s (<5s)")
    assert ok


def test_c6_ccm_asymmetry_and_convergence(report):
    t0 = time.perf_counter()
    coupled_ok = indep_ok = 0
    for seed in SEEDS:
        ds = gen_coupled_maps(3000, c_xy=0.4, c_yx=0.0, seed=seed)
        r = ccm_convergence(ds["x"], ds["y"], E=3, tau=1, seed=seed)
        coupled_ok += r.x_to_y.converged and r.x_to_y.mean_skill[-1] > r.y_to_x.mean_skill[-1]
        ds = gen_coupled_maps(3000, c_xy=0.0, c_yx=0.0, seed=seed)
        r = ccm_convergence(ds["x"], ds["y"], E=3, tau=1, seed=seed)
        indep_ok += not r.x_to_y.converged and not r.y_to_x.converged
    elapsed = time.perf_counter() - t0
    ok = coupled_ok >= 90 and indep_ok >= 90 and elapsed < 180
    report("C6 CCM asymmetry and convergence", ok,
           f"coupled correct {coupled_ok}/100 (>=90), independent unconverged {indep_ok}/100 (>=90), "
           f"{elapsed:.1f}s (<180s)")
    assert ok


def test_c7_ccc_asymmetry(report):
    t0 = time.perf_counter()
    params = CccParams(L=100, w=15, delta=50, bins=4)
    asym = 0
    for seed in SEEDS:
        ds = gen_coupled_maps(3000, c_xy=0.4, c_yx=0.0, seed=seed)
        asym += abs(ccc_pair(ds["x"], ds["y"], params).ccc) > abs(ccc_pair(ds["y"], ds["x"], params).ccc)
    below = 0
    for seed in SEEDS:
        ds = gen_coupled_maps(3000, c_xy=0.0, c_yx=0.0, seed=seed)
        x, y = ds["x"], ds["y"]
        observed = abs(ccc_pair(x, y, params).ccc)
        spec = SurrogateSpec("circular_shift", 99, seed)
        null = [abs(ccc_pair(make_surrogate(x, spec, i), y, params).ccc) for i in range(99)]
        below += add_one_p_value(observed, null) > 0.05
    elapsed = time.perf_counter() - t0
    ok = asym >= 90 and below >= 90 and elapsed < 300
    report("C7 CCC asymmetry", ok,
           f"|CCC(x->y)| > |CCC(y->x)| in {asym}/100 (>=90), independent below surrogate 95th pct "
           f"{below}/100 (>=90), {elapsed:.1f}s (<300s)")
    assert ok


def test_c8_confounder_demo(report):
    t0 = time.perf_counter()
    high = 0
    edge_free = True
    for seed in SEEDS:
        ds = gen_confounded(2000, lag_x=0, lag_y=0, noise_sd=0.1, seed=seed)
        high += pearson_correlation(ds["x"], ds["y"]).rho > 0.9
        edge_free &= not ds.has_edge("x", "y") and not ds.has_edge("y", "x")
    elapsed = time.perf_counter() - t0
    ok = high >= 99 and edge_free and elapsed < 5
    report("C8 confounder demo", ok,
           f"rho(x,y) > 0.9 in {high}/100 (>=99), truth has no x<->y edge: {edge_free}, "
           f"{elapsed:.2f}s (<5s)")
    assert ok


def _digest(args, out):
    assert main(args + ["--format", "jsonl", "--output", str(out)]) == 0
    return hashlib.sha256(out.read_bytes()).hexdigest()


def test_c9_reproducibility(report, tmp_path):
    data = tmp_path / "maps.csv"
    assert main(["synth", "--system", "coupled_maps", "--n", "800", "--seed", "1",
                 "--output", str(data)]) == 0
    runs = [
        ["bench", "--system", "coupled_ar", "--trials", "3", "--n", "400", "--seed", "1",
         "--lib-lengths", "10,50,200"],
        ["gc", "--input", str(data), "--seed", "1"],
        ["te", "--input", str(data), "--seed", "1", "--surrogates", "19"],
        ["ccc", "--input", str(data), "--seed", "1", "--surrogates", "19"],
        ["ccm", "--input", str(data), "--seed", "1", "--lib-lengths", "10,50,200,700"],
        ["corr", "--input", str(data)],
    ]
    same = [_digest(a, tmp_path / "a.jsonl") == _digest(a, tmp_path / "b.jsonl") for a in runs]
    ok = all(same)
    report("C9 reproducibility", ok, f"byte-identical jsonl for {sum(same)}/{len(runs)} invocations")
    assert ok
