"""Grid search over the factor count or the sparsity penalty, scored by PRESS or LOOCV."""

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneracyError, DimensionError, PlsPressError
from .numkernel import svd_truncated
from .press import latent_press_residuals, loocv_full_residuals
from .pls import fit_arrays
from .simgen import SimConfig, draw_j, draw_R, make_rng, simulate
from .sparse import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    gamma_grid,
    sparse_rank_one,
    sparse_weights_beta,
)

log = logging.getLogger(__name__)

SELECT_METHODS = ("press", "loocv_full")
TIE_RTOL = 1e-10
DEFAULT_R_MAX = 10
HIT_F1 = 0.9
N_BATCHES = 10


@dataclass(frozen=True)
class SelectionResult:
    grid: np.ndarray
    scores: np.ndarray
    chosen: float
    method: str
    elapsed: float
    support: np.ndarray | None = None

    def to_dict(self):
        out = {
            "grid": self.grid.tolist(),
            "scores": [float(s) for s in self.scores],
            "chosen": self.chosen,
            "method": self.method,
            "elapsed": self.elapsed,
        }
        if self.support is not None:
            out["support"] = self.support.tolist()
        return out


def argmin_index(scores):
    """Index of the minimal score; near-ties resolve to the earliest (simplest) candidate.

    Scores within ``1e-10`` times the largest finite score of the minimum
    count as tied, so numerically-zero errors of nested exact models do not
    pick the larger model on rounding noise.
    """
    scores = np.asarray(scores, dtype=np.float64)
    finite = np.isfinite(scores)
    if not np.any(finite):
        return 0
    best = scores[finite].min()
    slack = TIE_RTOL * scores[finite].max()
    return int(np.flatnonzero(finite & (scores <= best + slack))[0])


def _mean_sq(E):
    return float(np.mean(np.einsum("ij,ij->i", E, E)))


def _check_method(method):
    if method not in SELECT_METHODS:
        raise ValueError(f"method must be one of {SELECT_METHODS}, got {method!r}")


def select_R(data, R_max=DEFAULT_R_MAX, method="press"):
    """Score R = 1..R_max and choose the minimizer."""
    _check_method(method)
    start = time.perf_counter()
    R_max = int(R_max)
    if not 1 <= R_max <= min(data.p, data.q):
        raise DimensionError(f"R_max={R_max} must lie in [1, {min(data.p, data.q)}]")
    grid = np.arange(1, R_max + 1)
    scores = np.full(R_max, np.inf)
    if method == "press":
        svd = svd_truncated(data.X.T @ data.Y, R_max)
        for k, R in enumerate(grid):
            try:
                fit = fit_arrays(data.X, data.Y, int(R), svd=svd)
                scores[k] = _mean_sq(latent_press_residuals(fit.T, fit.S, data.Y))
            except PlsPressError as exc:
                log.info("R=%d scored inf: %s", R, exc)
    else:
        residuals = loocv_full_residuals(data.X, data.Y, grid)
        for k, R in enumerate(grid):
            E = residuals[int(R)]
            if isinstance(E, Exception):
                log.info("R=%d scored inf: %s", R, E)
            else:
                scores[k] = _mean_sq(E)
    chosen = int(grid[argmin_index(scores)])
    return SelectionResult(grid, scores, chosen, method, time.perf_counter() - start)


def _gamma_press_scores(data, grid, svd, tol, max_iter):
    M = data.X.T @ data.Y
    scores = np.full(len(grid), np.inf)
    for k, gamma in enumerate(grid):
        fit = sparse_rank_one(M, gamma, tol, max_iter, svd=svd)
        if fit.nnz == 0:
            continue
        u = fit.u_sparse / np.linalg.norm(fit.u_sparse)
        try:
            E = latent_press_residuals(
                (data.X @ u)[:, None], (data.Y @ fit.v_unit)[:, None], data.Y
            )
        except PlsPressError as exc:
            log.info("gamma=%g scored inf: %s", gamma, exc)
            continue
        scores[k] = _mean_sq(E)
    return scores


def _gamma_loocv_scores(data, grid, tol, max_iter):
    X, Y = data.X, data.Y
    n = data.n
    sq = np.zeros(len(grid))
    failed = np.zeros(len(grid), dtype=bool)
    keep = np.ones(n, dtype=bool)
    for i in range(n):
        keep[i] = False
        Xi, Yi = X[keep], Y[keep]
        keep[i] = True
        mx = Xi.mean(axis=0)
        my = Yi.mean(axis=0)
        Xi = Xi - mx
        Yi = Yi - my
        Mi = np.ascontiguousarray(Xi.T @ Yi)
        svd = svd_truncated(Mi, 1)
        x_new = X[i] - mx
        for k, gamma in enumerate(grid):
            if failed[k]:
                continue
            fit = sparse_rank_one(Mi, gamma, tol, max_iter, svd=svd)
            if fit.nnz == 0:
                failed[k] = True
                continue
            try:
                beta = sparse_weights_beta(Xi, Yi, fit.u_sparse, fit.v_unit)
            except DegeneracyError:
                failed[k] = True
                continue
            e = Y[i] - (x_new @ beta + my)
            sq[k] += e @ e
    scores = sq / n
    scores[failed] = np.inf
    return scores


def select_gamma(data, grid_size=100, method="press", tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Score a penalty grid for the one-factor sparse model and choose the minimizer.

    The grid runs from 0 to the full-data `gamma_max`. PRESS freezes the
    normalized sparse weights from the full-data solve; LOOCV re-solves the
    sparse problem on every deletion. Fully shrunk candidates score infinity.
    """
    _check_method(method)
    start = time.perf_counter()
    M = data.X.T @ data.Y
    svd = svd_truncated(M, 1)
    grid = gamma_grid(M, grid_size, svd=svd)
    if method == "press":
        scores = _gamma_press_scores(data, grid, svd, tol, max_iter)
    else:
        scores = _gamma_loocv_scores(data, grid, tol, max_iter)
    k = argmin_index(scores)
    fit = sparse_rank_one(M, grid[k], tol, max_iter, svd=svd)
    return SelectionResult(
        grid, scores, float(grid[k]), method, time.perf_counter() - start, support=fit.support
    )


def support_f1(selected, truth):
    """F1 score between two index sets."""
    selected = set(np.asarray(selected).tolist())
    truth = set(np.asarray(truth).tolist())
    if not selected and not truth:
        return 1.0
    tp = len(selected & truth)
    if tp == 0:
        return 0.0
    precision = tp / len(selected)
    recall = tp / len(truth)
    return 2 * precision * recall / (precision + recall)


@dataclass(frozen=True)
class TrialOutcome:
    trial: int
    truth: float
    chosen_press: float
    chosen_loocv: float
    hit_press: bool
    hit_loocv: bool
    f1_press: float | None = None
    f1_loocv: float | None = None
    f1_between: float | None = None
    error: str | None = None


@dataclass(frozen=True)
class SensitivityRecord:
    """Hit counts of PRESS and LOOCV selection against simulation truth.

    `se` is the standard deviation of the ratio across up to 10 contiguous
    batches of trials; batches with no LOOCV hits are skipped. `ratio` is NaN
    (and `ratio_defined` False) when LOOCV never hits.
    """

    kind: str
    n: int
    p: int
    q: int
    seed: int
    trials: int
    hits_press: int
    hits_loocv: int
    ratio: float
    se: float
    failures: int
    agreement: float
    outcomes: list = field(default_factory=list, repr=False)

    @property
    def ratio_defined(self):
        return self.hits_loocv > 0

    def row(self):
        return {
            "n": self.n,
            "p": self.p,
            "q": self.q,
            "mode": self.kind,
            "trials": self.trials,
            "ratio": self.ratio,
            "se": self.se,
            "seed": self.seed,
            "hits_press": self.hits_press,
            "hits_loocv": self.hits_loocv,
            "agreement": self.agreement,
            "failures": self.failures,
        }


def run_trial(kind, n, p, q, seed, trial, sim_options=None, R_max=DEFAULT_R_MAX, grid_size=100):
    """Simulate one dataset on stream ``(trial,)`` of `seed` and score both methods on it."""
    rng = make_rng(seed, (trial,))
    opts = dict(sim_options or {})
    sim_seed = int(rng.integers(2**63))
    if kind == "select_R":
        R_true = draw_R(rng)
        sim = simulate(SimConfig(n=n, p=p, q=q, R_true=R_true, seed=sim_seed, **opts))
        r_max = min(R_max, p, q)
        a = select_R(sim.data, r_max, "press")
        b = select_R(sim.data, r_max, "loocv_full")
        return TrialOutcome(
            trial, R_true, a.chosen, b.chosen, a.chosen == R_true, b.chosen == R_true
        )
    if kind == "select_gamma":
        j = draw_j(rng)
        sim = simulate(SimConfig(n=n, p=p, q=q, R_true=1, sparsity_j=j, seed=sim_seed, **opts))
        truth = sim.truth.support_true
        a = select_gamma(sim.data, grid_size, "press")
        b = select_gamma(sim.data, grid_size, "loocv_full")
        fa = support_f1(a.support, truth)
        fb = support_f1(b.support, truth)
        return TrialOutcome(
            trial, j, a.chosen, b.chosen, fa >= HIT_F1, fb >= HIT_F1,
            f1_press=fa, f1_loocv=fb, f1_between=support_f1(a.support, b.support),
        )
    raise ValueError(f"unknown experiment kind {kind!r}")


def _ratio(hp, hl):
    return hp / hl if hl > 0 else float("nan")


def sensitivity_experiment(kind, n, p, q, trials, seed, *, sim_options=None, n_jobs=1,
                           R_max=DEFAULT_R_MAX, grid_size=100):
    """Monte Carlo comparison of PRESS and LOOCV selection accuracy.

    Each trial draws its own truth (R for ``select_R``, the sparsity divisor
    for ``select_gamma``). A ``select_gamma`` trial counts as a hit when the
    selected support has F1 >= 0.9 against the true support. Failed trials are
    counted and excluded.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    args = [(kind, n, p, q, seed, t, sim_options, R_max, grid_size) for t in range(trials)]

    def guarded(a):
        try:
            return run_trial(*a)
        except PlsPressError as exc:
            log.warning("trial %d failed: %s", a[5], exc)
            return TrialOutcome(a[5], np.nan, np.nan, np.nan, False, False, error=str(exc))

    if n_jobs == 1:
        outcomes = [guarded(a) for a in args]
    else:
        from joblib import Parallel, delayed

        outcomes = Parallel(n_jobs=n_jobs)(delayed(guarded)(a) for a in args)

    good = [o for o in outcomes if o.error is None]
    hp = sum(o.hit_press for o in good)
    hl = sum(o.hit_loocv for o in good)
    agree = float(np.mean([o.chosen_press == o.chosen_loocv for o in good])) if good else float("nan")

    batch_ratios = []
    for batch in np.array_split(np.arange(len(good)), min(N_BATCHES, max(len(good), 1))):
        bl = sum(good[k].hit_loocv for k in batch)
        if bl > 0:
            batch_ratios.append(sum(good[k].hit_press for k in batch) / bl)
    se = float(np.std(batch_ratios, ddof=1)) if len(batch_ratios) > 1 else float("nan")

    return SensitivityRecord(
        kind=kind, n=n, p=p, q=q, seed=seed, trials=len(good),
        hits_press=hp, hits_loocv=hl, ratio=_ratio(hp, hl), se=se,
        failures=len(outcomes) - len(good), agreement=agree, outcomes=outcomes,
    )
