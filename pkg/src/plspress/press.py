"""Leave-one-out prediction error for OLS and two-block PLS.

`press_ols` and `press_pls` compute leave-one-out residuals analytically from
a single fit using rank-one downdates. `loocv_pls_fixed_subspace` and
`loocv_pls_full` are explicit-deletion oracles: the former keeps the PLS
weights from the full-data fit (the approximation `press_pls` makes exactly),
the latter refits everything including centering and the SVD.
"""

import time
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import DegeneracyError, DimensionError, LeverageSingularityError
from .numkernel import LEVERAGE_MARGIN, as_matrix, svd_truncated
from .pls import fit_arrays, fit_pls, inner_coefficients, outer_loadings

METHODS = ("analytic", "oracle_fixed_subspace", "oracle_full")


@dataclass(frozen=True)
class PressResult:
    """Leave-one-out residuals ``e(i)`` (one row per observation) and their mean squared norm."""

    loo_residuals: np.ndarray
    press_value: float
    method: str
    elapsed: float

    @classmethod
    def from_residuals(cls, E, method, elapsed):
        return cls(
            loo_residuals=E,
            press_value=float(np.mean(np.einsum("ij,ij->i", E, E))),
            method=method,
            elapsed=elapsed,
        )


def _check_leverage(h, block):
    """Raise on the first leverage within the singularity margin of one."""
    bad = h >= 1.0 - LEVERAGE_MARGIN
    if np.any(bad):
        flat = int(np.argmax(bad.reshape(len(h), -1).any(axis=1)))
        hv = float(np.max(np.atleast_1d(h[flat])))
        raise LeverageSingularityError(
            f"observation {flat} is pivotal in block '{block}' (leverage {hv:.17g})",
            index=flat,
            block=block,
            leverage=hv,
        )


def press_ols(X, Y):
    """Exact leave-one-out residuals of multivariate OLS, ``e_i / (1 - h_i)``."""
    start = time.perf_counter()
    X = as_matrix(X, "X")
    Y = as_matrix(Y, "Y")
    n, p = X.shape
    if Y.shape[0] != n:
        raise DimensionError(f"X has {n} rows but Y has {Y.shape[0]}")
    if n <= p:
        raise DimensionError(f"OLS PRESS needs n > p, got n={n}, p={p}")
    G = X.T @ X
    eig = np.linalg.eigvalsh(G)
    if eig[0] <= 1e-12 * eig[-1]:
        raise DegeneracyError("X^T X is singular or ill-conditioned")
    P = np.linalg.inv(G)
    beta = P @ (X.T @ Y)
    h = np.einsum("ij,jk,ik->i", X, P, X)
    _check_leverage(h, "x")
    E = (Y - X @ beta) / (1.0 - h)[:, None]
    return PressResult.from_residuals(E, "analytic", time.perf_counter() - start)


def latent_press_residuals(T, S, Y):
    """Leave-one-out residuals for fixed latent factors ``T``, ``S``.

    For each row the per-component inner slopes and the joint Y-loadings are
    downdated by Sherman-Morrison and recombined into
    ``e(i) = y_i - t_i D(i) Q(i)^T``.
    """
    T = np.ascontiguousarray(T, dtype=np.float64)
    S = np.ascontiguousarray(S, dtype=np.float64)
    Y = np.ascontiguousarray(Y, dtype=np.float64)
    d = inner_coefficients(T, S)
    tt = np.einsum("ij,ij->j", T, T)
    _check_leverage(T * T / tt, "t")
    G = S.T @ S
    try:
        Ps = np.linalg.inv(G)
    except np.linalg.LinAlgError as exc:
        raise DegeneracyError("Y-latent factors are linearly dependent") from exc
    _check_leverage(np.einsum("ij,jk,ik->i", S, Ps, S), "s")
    Qt = np.ascontiguousarray(Ps @ (S.T @ Y))
    return kernels.press_loop(T, S, Y, d, tt, np.ascontiguousarray(Ps), Qt)


def press_pls(fit, data):
    """Analytic PRESS of a fitted PLS model, with the weights `U`, `V` held fixed."""
    start = time.perf_counter()
    if fit.T.shape[0] != data.n:
        raise DimensionError("fit was not computed on this data")
    E = latent_press_residuals(fit.T, fit.S, data.Y)
    return PressResult.from_residuals(E, "analytic", time.perf_counter() - start)


def loocv_pls_fixed_subspace(data, R):
    """Explicit leave-one-out with `U`, `V` frozen at their full-data values."""
    start = time.perf_counter()
    fit = fit_pls(data, R)
    T, S, Y = fit.T, fit.S, data.Y
    n = data.n
    E = np.empty_like(Y)
    keep = np.ones(n, dtype=bool)
    for i in range(n):
        keep[i] = False
        Ti, Si, Yi = T[keep], S[keep], Y[keep]
        keep[i] = True
        try:
            d_i = inner_coefficients(Ti, Si)
            Qt_i, *_ = np.linalg.lstsq(Si, Yi, rcond=None)
        except DegeneracyError as exc:
            raise DegeneracyError(f"deletion of observation {i}: {exc}") from exc
        E[i] = Y[i] - (T[i] * d_i) @ Qt_i
    return PressResult.from_residuals(E, "oracle_fixed_subspace", time.perf_counter() - start)


def loocv_full_residuals(X, Y, Rs):
    """Full-refit leave-one-out residuals for several factor counts at once.

    Each deletion re-centers the remaining ``n - 1`` rows, recomputes the SVD
    of their cross-product and refits; the held-out row is centered with the
    training means. One SVD per deletion serves every entry of `Rs`.

    Returns
    -------
    dict
        Maps each R to an (n, q) residual array. A factor count whose fit
        fails for some deletion maps to the raised exception instead.
    """
    n, q = Y.shape
    Rs = sorted(set(int(r) for r in Rs))
    R_top = Rs[-1]
    out = {R: np.empty((n, q)) for R in Rs}
    keep = np.ones(n, dtype=bool)
    for i in range(n):
        keep[i] = False
        Xi, Yi = X[keep], Y[keep]
        keep[i] = True
        mx = Xi.mean(axis=0)
        my = Yi.mean(axis=0)
        Xi = Xi - mx
        Yi = Yi - my
        svd = svd_truncated(Xi.T @ Yi, R_top)
        x_new = X[i] - mx
        for R in Rs:
            if isinstance(out[R], Exception):
                continue
            try:
                fit = fit_arrays(Xi, Yi, R, svd=svd)
            except DegeneracyError as exc:
                out[R] = DegeneracyError(f"deletion of observation {i}: {exc}")
                continue
            out[R][i] = Y[i] - (x_new @ fit.beta + my)
    return out


def loocv_pls_full(data, R):
    """Leave-one-out cross-validation refitting the whole PLS model per deletion."""
    start = time.perf_counter()
    R = int(R)
    if not 1 <= R <= min(data.p, data.q):
        raise DimensionError(f"R={R} must lie in [1, {min(data.p, data.q)}]")
    E = loocv_full_residuals(data.X, data.Y, [R])[R]
    if isinstance(E, Exception):
        raise E
    return PressResult.from_residuals(E, "oracle_full", time.perf_counter() - start)


@dataclass(frozen=True)
class PerturbationReport:
    """Singular-value shifts of the sample cross-covariance under single-row deletion.

    ``rank_one_norms[i]`` is the spectral norm of ``M_n - M_{n,-i}``, the
    perturbation that deleting row `i` actually applies, so
    ``per_obs_gap[i] <= rank_one_norms[i]`` is Weyl's inequality.
    """

    per_obs_gap: np.ndarray
    rank_one_norms: np.ndarray
    max_gap: float


def sv_perturbation_gap(data, R):
    """Compare the top-`R` singular values of ``X^T Y / n`` with each deleted version.

    The deleted matrix drops the row's rank-one term ``x_i^T y_i`` and is
    normalized by ``n - 1``.
    """
    n = data.n
    R = int(R)
    if not 1 <= R <= min(data.p, data.q):
        raise DimensionError(f"R={R} must lie in [1, {min(data.p, data.q)}]")
    C = data.X.T @ data.Y
    Mn = C / n
    g_full = np.linalg.svd(Mn, compute_uv=False)[:R]
    gaps = np.empty(n)
    norms = np.empty(n)
    for i in range(n):
        Mi = (C - np.outer(data.X[i], data.Y[i])) / (n - 1)
        gaps[i] = np.max(np.abs(g_full - np.linalg.svd(Mi, compute_uv=False)[:R]))
        norms[i] = np.linalg.norm(Mn - Mi, 2)
    return PerturbationReport(per_obs_gap=gaps, rank_one_norms=norms, max_gap=float(gaps.max()))
