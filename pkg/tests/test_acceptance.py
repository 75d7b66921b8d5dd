"""End-to-end acceptance checks.

Each test prints one ``CRITERION k: PASS|FAIL`` line with the measured
quantities, then asserts the same condition. Thresholds are fixed; nothing
here is tuned to make a check pass.
"""

import time

import numpy as np
import pytest

from plspress import (
    SimConfig,
    center,
    fit_pls,
    loocv_pls_fixed_subspace,
    press_ols,
    press_pls,
    sensitivity_experiment,
    simulate,
    soft_threshold,
    sparse_rank_one,
    sv_perturbation_gap,
)
from plspress.experiments import error_decay, timing_scaling
from plspress.sparse import gamma_max


def report(capsys, k, ok, detail):
    with capsys.disabled():
        print(f"\nCRITERION {k}: {'PASS' if ok else 'FAIL'} | {detail}")


def ols_loo(X, Y):
    E = np.empty_like(Y)
    for i in range(X.shape[0]):
        b = np.linalg.lstsq(np.delete(X, i, 0), np.delete(Y, i, 0), rcond=None)[0]
        E[i] = Y[i] - X[i] @ b
    return E


def test_criterion_1_ols_press_exact(capsys):
    rng = np.random.default_rng(101)
    instances = []
    for _ in range(20):
        X = rng.standard_normal((50, 10))
        instances.append((X, X @ rng.standard_normal((10, 3)) + rng.standard_normal((50, 3))))
    start = time.perf_counter()
    results = [press_ols(X, Y) for X, Y in instances]
    elapsed = time.perf_counter() - start
    err = max(np.max(np.abs(r.loo_residuals - ols_loo(X, Y))) for r, (X, Y) in zip(results, instances))
    ok = err <= 1e-10 and elapsed < 1.0
    report(capsys, 1, ok, f"max abs error {err:.3g}, runtime {elapsed:.3g}s")
    assert ok


def test_criterion_2_fixed_subspace_exact(capsys):
    start = time.perf_counter()
    worst_value = worst_row = 0.0
    for seed in range(20):
        data = simulate(SimConfig(n=100, p=20, q=20, R_true=3, seed=seed)).data
        for R in (1, 3, 5):
            a = press_pls(fit_pls(data, R), data)
            b = loocv_pls_fixed_subspace(data, R)
            worst_value = max(worst_value, abs(a.press_value - b.press_value) / b.press_value)
            diff = np.linalg.norm(a.loo_residuals - b.loo_residuals, axis=1)
            worst_row = max(worst_row, np.max(diff / np.linalg.norm(b.loo_residuals, axis=1)))
    elapsed = time.perf_counter() - start
    ok = worst_value <= 1e-8 and worst_row <= 1e-8 and elapsed < 10
    report(capsys, 2, ok, f"press_value rel {worst_value:.3g}, residual rel {worst_row:.3g}, "
                          f"runtime {elapsed:.3g}s")
    assert ok


def test_criterion_3_gap_decays(capsys):
    start = time.perf_counter()
    rows, slope = error_decay([50, 100, 200, 400, 800], 20, 20, 3, 20, seed=303)
    elapsed = time.perf_counter() - start
    meds = [r["median_gap"] for r in rows]
    ok = all(b < a for a, b in zip(meds, meds[1:])) and elapsed < 600
    report(capsys, 3, ok, "median gaps " + ", ".join(f"{m:.3g}" for m in meds)
           + f", slope {slope:.3g}, runtime {elapsed:.3g}s")
    assert ok


def test_criterion_4_perturbation_bound(capsys):
    rng = np.random.default_rng(404)
    start = time.perf_counter()
    violations = 0
    worst = -np.inf
    for _ in range(50):
        n = int(rng.integers(5, 120))
        p, q = (int(v) for v in rng.integers(1, 30, size=2))
        X = rng.standard_normal((n, p)) * rng.uniform(0.1, 10)
        Y = X[:, :1] @ rng.standard_normal((1, q)) + rng.standard_normal((n, q))
        rep = sv_perturbation_gap(center(X, Y), min(p, q))
        slack = rep.per_obs_gap - rep.rank_one_norms
        violations += int(np.sum(slack > 1e-9))
        worst = max(worst, slack.max())
    elapsed = time.perf_counter() - start
    ok = violations == 0 and elapsed < 60
    report(capsys, 4, ok, f"violations {violations}, max(gap - bound) {worst:.3g}, "
                          f"runtime {elapsed:.3g}s")
    assert ok


@pytest.mark.slow
def test_criterion_5_selection_sensitivity(capsys):
    start = time.perf_counter()
    rec_R = sensitivity_experiment("select_R", 200, 100, 100, 50, seed=505)
    rec_g50 = sensitivity_experiment("select_gamma", 50, 100, 100, 50, seed=506)
    rec_g200 = sensitivity_experiment("select_gamma", 200, 100, 100, 50, seed=507)
    elapsed = time.perf_counter() - start
    r_ok = rec_R.ratio_defined and rec_R.ratio >= 0.95
    g_ok = rec_g50.ratio_defined and rec_g200.ratio_defined and rec_g50.ratio <= rec_g200.ratio
    ok = r_ok and g_ok and elapsed < 1800

    def fmt(rec):
        return f"{rec.hits_press}/{rec.hits_loocv} hits, ratio {rec.ratio:.3g}"

    report(capsys, 5, ok, f"R n=200: {fmt(rec_R)} ({'ok' if r_ok else 'below 0.95'}); "
                          f"gamma n=50: {fmt(rec_g50)}; gamma n=200: {fmt(rec_g200)} "
                          f"({'ok' if g_ok else 'not directional'}); runtime {elapsed:.3g}s")
    assert ok


@pytest.mark.slow
def test_criterion_6_timing_scaling(capsys):
    start = time.perf_counter()
    rows = timing_scaling([400, 800], 50, 50, 3, 5, seed=606, threads=1)
    elapsed = time.perf_counter() - start
    t = {(r["method"], r["n"]): r["seconds"] for r in rows}
    press_ratio = t["press", 800] / t["press", 400]
    loocv_ratio = t["loocv", 800] / t["loocv", 400]
    ok = press_ratio <= 2.8 and loocv_ratio >= 3.0 and elapsed < 900
    report(capsys, 6, ok, f"press x{press_ratio:.3g} (<= 2.8), loocv x{loocv_ratio:.3g} (>= 3.0), "
                          f"runtime {elapsed:.3g}s")
    assert ok


def test_criterion_7_sparse_properties(capsys):
    start = time.perf_counter()
    cases = [([3.0, -1.0, 0.5], 1.0, [2.0, 0.0, 0.0]),
             ([0.0, 1.0, -1.0], 1.0, [0.0, 0.0, 0.0]),
             ([-4.0, 2.5, 0.0], 0.0, [-4.0, 2.5, 0.0]),
             ([1.5, -2.0], 0.5, [1.0, -1.5])]
    soft_ok = all(np.array_equal(soft_threshold(z, g), want) for z, g, want in cases)
    dir_err = 0.0
    monotone = True
    shrunk = True
    for seed in range(20):
        rng = np.random.default_rng(700 + seed)
        M = rng.standard_normal((30, 12))
        U = np.linalg.svd(M)[0][:, 0]
        u = sparse_rank_one(M, 0.0).u_sparse
        u = u / np.linalg.norm(u)
        dir_err = max(dir_err, min(np.linalg.norm(u - U), np.linalg.norm(u + U)))
        gmax = gamma_max(M)
        for frac in (0.0, 0.25, 0.5, 0.75):
            obj = sparse_rank_one(M, frac * gmax, trace=True).objective
            monotone &= bool(np.all(np.diff(obj) <= 1e-10 * max(1.0, abs(obj[0]))))
        shrunk &= sparse_rank_one(M, gmax).nnz == 0
    elapsed = time.perf_counter() - start
    ok = soft_ok and dir_err <= 1e-8 and monotone and shrunk and elapsed < 60
    report(capsys, 7, ok, f"soft-threshold cases {'exact' if soft_ok else 'wrong'}, "
                          f"direction error {dir_err:.3g}, monotone {monotone}, "
                          f"gamma_max shrinks {shrunk}, runtime {elapsed:.3g}s")
    assert ok


@pytest.mark.slow
def test_criterion_8_support_recovery(capsys):
    start = time.perf_counter()
    # strong signal: latent covariance 100 against unit noise
    rec = sensitivity_experiment("select_gamma", 200, 100, 100, 20, seed=808,
                                 sim_options={"cov_schedule": (100.0,)})
    elapsed = time.perf_counter() - start
    good = [o for o in rec.outcomes if o.error is None]
    med_f1 = float(np.median([o.f1_press for o in good]))
    agree = float(np.mean([o.f1_between >= 0.9 for o in good]))
    ok = len(good) == 20 and med_f1 >= 0.8 and agree >= 0.8 and elapsed < 1800
    report(capsys, 8, ok, f"median PRESS F1 {med_f1:.3g} (>= 0.8), supports agree in "
                          f"{agree:.0%} of trials (>= 80%), failures {rec.failures}, "
                          f"runtime {elapsed:.3g}s")
    assert ok
