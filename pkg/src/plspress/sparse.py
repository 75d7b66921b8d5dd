"""Sparse rank-one PLS via L1-penalized decomposition of ``M = X^T Y``.

The solver alternates a soft-thresholded update of the X-weight with a
normalized update of the Y-weight, starting from the leading singular pair.
Each half-step exactly minimizes

    0.5 * ||M - u v^T||_F^2 + gamma * ||u||_1    subject to ||v||_2 = 1

over its block, so this objective never increases.
"""

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import DegeneracyError, InputError
from .numkernel import as_matrix, svd_truncated

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 500


@dataclass(frozen=True)
class SparseFit:
    """Sparse X-weight `u_sparse` and unit Y-weight `v_unit` for penalty `gamma`."""

    u_sparse: np.ndarray
    v_unit: np.ndarray
    gamma: float
    nnz: int
    iterations: int
    converged: bool
    objective: np.ndarray | None = None

    @property
    def support(self):
        return np.flatnonzero(self.u_sparse)


def soft_threshold(z, gamma):
    """Componentwise ``sign(z) * max(|z| - gamma, 0)``."""
    if gamma < 0:
        raise ValueError(f"gamma must be non-negative, got {gamma}")
    z = np.asarray(z, dtype=np.float64)
    if not np.all(np.isfinite(z)):
        raise InputError("z contains NaN or Inf")
    return np.sign(z) * np.maximum(np.abs(z) - gamma, 0.0)


def sparse_rank_one(M, gamma, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, *, svd=None, trace=False):
    """Solve the penalized rank-one problem by alternating updates.

    Parameters
    ----------
    M : array_like, shape (p, q)
    gamma : float
        L1 penalty on the X-weight.
    tol : float
        Stop once the max-norm change of the X-weight drops below `tol`.
    max_iter : int
    svd : SvdTruncated, optional
        Precomputed decomposition of `M` for the warm start.
    trace : bool
        Record the objective before the first and after every iteration.
    """
    M = np.ascontiguousarray(as_matrix(M, "M"))
    if gamma < 0:
        raise ValueError(f"gamma must be non-negative, got {gamma}")
    if tol <= 0 or max_iter < 1:
        raise ValueError("tol must be positive and max_iter at least 1")
    if svd is None:
        svd = svd_truncated(M, 1)
    u0 = np.ascontiguousarray(svd.U[:, 0])
    v0 = np.ascontiguousarray(svd.V[:, 0])
    u, v, it, converged, objective = kernels.sparse_iterate(
        M, u0, v0, float(gamma), float(tol), int(max_iter), bool(trace)
    )
    return SparseFit(
        u_sparse=u,
        v_unit=v,
        gamma=float(gamma),
        nnz=int(np.count_nonzero(u)),
        iterations=int(it),
        converged=bool(converged),
        objective=objective,
    )


def gamma_max(M, svd=None):
    """Smallest penalty that zeroes the X-weight on the first iteration.

    ``M v`` is taken from one unpenalized kernel step so that thresholding at
    this value reproduces the kernel's own arithmetic and zeroes exactly.
    """
    M = np.ascontiguousarray(as_matrix(M, "M"))
    if svd is None:
        svd = svd_truncated(M, 1)
    Mv = kernels.sparse_iterate(
        M, np.ascontiguousarray(svd.U[:, 0]), np.ascontiguousarray(svd.V[:, 0]),
        0.0, 1.0, 1, False,
    )[0]
    return float(np.max(np.abs(Mv)))


def gamma_grid(M, count, svd=None):
    """`count` evenly spaced penalties from 0 to `gamma_max`, ascending."""
    if count < 2:
        raise ValueError(f"grid needs at least 2 points, got {count}")
    return np.linspace(0.0, gamma_max(M, svd), int(count))


def sparse_weights_beta(X, Y, u, v):
    """Regression coefficients of the one-factor model with weights `u`, `v`.

    `u` is normalized first; rows of the result where `u` is zero are exactly zero.
    """
    norm = np.linalg.norm(u)
    if norm == 0:
        raise DegeneracyError("X-weight is identically zero")
    u = u / norm
    t = X @ u
    s = Y @ v
    tt = t @ t
    ss = s @ s
    if tt <= 1e-12 or ss <= 1e-12:
        raise DegeneracyError("sparse latent factor is degenerate")
    d = (t @ s) / tt
    q = (s @ Y) / ss
    return np.outer(u * d, q)


def sparse_beta(data, fit):
    """Coefficient matrix of the one-factor sparse PLS model `fit` on `data`."""
    if fit.nnz == 0:
        raise DegeneracyError(f"fit at gamma={fit.gamma} is fully shrunk")
    return sparse_weights_beta(data.X, data.Y, fit.u_sparse, fit.v_unit)
