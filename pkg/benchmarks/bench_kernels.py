"""Compare the compiled kernels against the NumPy fallback.

Run with ``python3 benchmarks/bench_kernels.py``. Both backends are timed on
identical inputs, single-threaded, as the median of several repeats after one
warm-up call.
"""

import argparse
import time

import numpy as np
from threadpoolctl import threadpool_limits

from plspress import _backend
from plspress._fallback import press_loop as py_press_loop
from plspress._fallback import sparse_iterate as py_sparse_iterate


def median_time(fn, repeats):
    fn()
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return float(np.median(times))


def press_inputs(rng, n, R, q):
    T = rng.standard_normal((n, R))
    S = T + 0.5 * rng.standard_normal((n, R))
    Y = S @ rng.standard_normal((R, q)) + rng.standard_normal((n, q))
    tt = np.sum(T * T, axis=0)
    d = np.sum(T * S, axis=0) / tt
    Ps = np.linalg.inv(S.T @ S)
    Qt = Ps @ S.T @ Y
    return T, S, Y, d, tt, Ps, Qt


def sparse_inputs(rng, p, q, frac):
    M = rng.standard_normal((p, q)) + 3.0 * np.outer(rng.random(p), rng.random(q))
    U, g, Vt = np.linalg.svd(M)
    gamma = frac * np.max(np.abs(M @ Vt[0]))
    return M, np.ascontiguousarray(U[:, 0]), np.ascontiguousarray(Vt[0]), gamma, 1e-8, 500, False


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=7)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)

    if _backend.compiled is None:
        print("compiled extension not available; timing the fallback only")
    cases = []
    for n, R, q in [(100, 3, 20), (1000, 3, 50), (10000, 5, 50)]:
        cases.append((f"press_loop n={n} R={R} q={q}", "press_loop", press_inputs(rng, n, R, q)))
    for p, q, frac in [(100, 100, 0.3), (1000, 100, 0.3), (1000, 100, 0.8)]:
        cases.append((f"sparse_iterate p={p} q={q} gamma={frac}*max", "sparse_iterate",
                      sparse_inputs(rng, p, q, frac)))

    fallback = {"press_loop": py_press_loop, "sparse_iterate": py_sparse_iterate}
    print(f"{'case':<42} {'numpy (s)':>12} {'cython (s)':>12} {'speedup':>8}")
    with threadpool_limits(limits=1):
        for label, name, inputs in cases:
            t_py = median_time(lambda: fallback[name](*inputs), args.repeats)
            if _backend.compiled is None:
                print(f"{label:<42} {t_py:12.3e} {'-':>12} {'-':>8}")
                continue
            fn = getattr(_backend.compiled, name)
            t_c = median_time(lambda: fn(*inputs), args.repeats)
            print(f"{label:<42} {t_py:12.3e} {t_c:12.3e} {t_py / t_c:8.2f}")


if __name__ == "__main__":
    main()
