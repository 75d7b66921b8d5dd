"""Benchmark drivers for timing scaling and PRESS-vs-LOOCV error decay."""

import time

import numpy as np
from threadpoolctl import threadpool_limits

from .pls import center, fit_pls
from .press import loocv_pls_full, press_pls
from .simgen import SimConfig, make_rng, simulate


def _trial_seed(seed, *stream):
    return int(make_rng(seed, stream).integers(2**63))


def relative_gap(data, R):
    """``|PRESS - LOOCV| / LOOCV`` for one dataset."""
    press = press_pls(fit_pls(data, R), data).press_value
    loo = loocv_pls_full(data, R).press_value
    return abs(press - loo) / loo


def error_decay(ns, p, q, R, seeds, seed, R_true=None):
    """Median relative PRESS/LOOCV gap per sample size.

    Returns the per-n rows and the least-squares slope of ``log(gap)`` against
    ``log(sqrt(log(n) / n))``.
    """
    if not ns:
        raise ValueError("need at least one sample size")
    R_true = R if R_true is None else R_true
    rows = []
    for n in ns:
        gaps = []
        for s in range(seeds):
            sim = simulate(SimConfig(n=n, p=p, q=q, R_true=R_true, seed=_trial_seed(seed, n, s)))
            gaps.append(relative_gap(sim.data, R))
        gaps = np.asarray(gaps)
        rows.append({
            "n": n,
            "median_gap": float(np.median(gaps)),
            "mean_gap": float(gaps.mean()),
            "max_gap": float(gaps.max()),
            "seeds": seeds,
            "rate": float(np.sqrt(np.log(n) / n)),
        })
    slope = float("nan")
    if len(rows) >= 2:
        x = np.log([r["rate"] for r in rows])
        y = np.log([r["median_gap"] for r in rows])
        slope = float(np.polyfit(x, y, 1)[0])
    return rows, slope


def _median_time(fn, repeats):
    fn()  # warm-up, excluded
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return float(np.median(times))


def timing_scaling(ns, p, q, R, repeats, seed, threads=1):
    """Median wall time of the PRESS and LOOCV paths per sample size.

    Both paths start from raw data and include centering and the model fit.
    Rows come back sorted by ``(method, n)``.
    """
    if not ns:
        raise ValueError("need at least one sample size")
    rows = []
    with threadpool_limits(limits=threads):
        for n in ns:
            sim = simulate(SimConfig(n=n, p=p, q=q, R_true=min(R, p, q), seed=_trial_seed(seed, n)))
            X, Y = sim.X_raw, sim.Y_raw

            def run_press():
                data = center(X, Y)
                return press_pls(fit_pls(data, R), data)

            def run_loocv():
                return loocv_pls_full(center(X, Y), R)

            rows.append({"method": "press", "n": n, "seconds": _median_time(run_press, repeats),
                         "repeats": repeats})
            rows.append({"method": "loocv", "n": n, "seconds": _median_time(run_loocv, repeats),
                         "repeats": repeats})
    rows.sort(key=lambda r: (r["method"], r["n"]))
    return rows
