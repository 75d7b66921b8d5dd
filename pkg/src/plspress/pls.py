"""Two-block PLS regression.

The weights `U`, `V` are the leading singular vectors of ``M = X^T Y``; all
`R` directions are read from a single SVD without deflation. The inner model
``S = T D + H`` has diagonal `D` fitted per component, and the Y-loadings `Q`
are the joint least-squares solution of ``Y ~ S Q^T``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, DimensionError, InputError
from .numkernel import as_matrix, svd_truncated

MIN_FACTOR_SS = 1e-12
CENTER_RTOL = 1e-10


@dataclass(frozen=True)
class DataBlock:
    """Paired covariate and response matrices sharing the row (observation) axis."""

    X: np.ndarray
    Y: np.ndarray
    centered: bool
    column_means_x: np.ndarray
    column_means_y: np.ndarray

    def __post_init__(self):
        if self.X.shape[0] != self.Y.shape[0]:
            raise DimensionError(
                f"X has {self.X.shape[0]} rows but Y has {self.Y.shape[0]}"
            )
        if self.X.shape[0] < 3:
            raise DimensionError(f"need at least 3 observations, got {self.X.shape[0]}")

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def p(self):
        return self.X.shape[1]

    @property
    def q(self):
        return self.Y.shape[1]

    def raw(self):
        """Return the uncentered ``(X, Y)``."""
        return self.X + self.column_means_x, self.Y + self.column_means_y

    def check_centered(self):
        for name, A in (("X", self.X), ("Y", self.Y)):
            scale = np.maximum(np.abs(A).max(axis=0), 1.0)
            if np.any(np.abs(A.mean(axis=0)) > CENTER_RTOL * scale):
                raise InputError(f"{name} is not column-centered")


def center(Xraw, Yraw):
    """Remove column means from `Xraw` and `Yraw`, keeping the means for prediction."""
    X = as_matrix(Xraw, "X")
    Y = as_matrix(Yraw, "Y")
    if X.shape[0] != Y.shape[0]:
        raise DimensionError(f"X has {X.shape[0]} rows but Y has {Y.shape[0]}")
    if X.shape[0] < 3:
        raise DimensionError(f"need at least 3 observations, got {X.shape[0]}")
    mx = X.mean(axis=0)
    my = Y.mean(axis=0)
    return DataBlock(X=X - mx, Y=Y - my, centered=True, column_means_x=mx, column_means_y=my)


@dataclass(frozen=True)
class PlsFit:
    """A fitted two-block PLS model with `R` latent factors.

    Attributes
    ----------
    U, V : ndarray
        X- and Y-weights, shapes (p, R) and (q, R).
    g : ndarray
        Leading singular values of ``X^T Y``.
    T, S : ndarray
        Latent factors ``X U`` and ``Y V``, shape (n, R).
    D : ndarray
        Diagonal (R, R) inner-model coefficients.
    Q : ndarray
        Y-loadings, shape (q, R).
    P_load : ndarray
        X-loadings ``X^T T (T^T T)^{-1}``, shape (p, R). Not used for prediction.
    beta : ndarray
        Regression coefficients ``U D Q^T``, shape (p, q).
    H_resid : ndarray
        Inner residuals ``S - T D``.
    Ey_resid : ndarray
        Outer residuals ``Y - X beta``.
    """

    R: int
    U: np.ndarray
    V: np.ndarray
    g: np.ndarray
    T: np.ndarray
    S: np.ndarray
    D: np.ndarray
    Q: np.ndarray
    P_load: np.ndarray
    beta: np.ndarray
    H_resid: np.ndarray
    Ey_resid: np.ndarray

    @property
    def d(self):
        return np.diag(self.D).copy()


def inner_coefficients(T, S):
    """Per-component least-squares slopes of `S` on `T`.

    Raises `DegeneracyError` naming the first component with ``t^T t <= 1e-12``.
    """
    tt = np.einsum("ij,ij->j", T, T)
    small = tt <= MIN_FACTOR_SS
    if np.any(small):
        r = int(np.argmax(small))
        raise DegeneracyError(f"latent factor {r + 1} is degenerate (t't = {tt[r]:.3g})")
    return np.einsum("ij,ij->j", T, S) / tt


def outer_loadings(S, Y):
    """``Q^T = (S^T S)^{-1} S^T Y`` as a (R, q) array."""
    G = S.T @ S
    try:
        return np.linalg.solve(G, S.T @ Y)
    except np.linalg.LinAlgError as exc:
        raise DegeneracyError("Y-latent factors are linearly dependent") from exc


def fit_arrays(X, Y, R, svd=None):
    """Fit on already-centered arrays without validating them.

    `svd` may carry a precomputed decomposition of ``X^T Y`` with at least `R`
    components; its first `R` are used.
    """
    if svd is None:
        svd = svd_truncated(X.T @ Y, R)
    U = svd.U[:, :R]
    V = svd.V[:, :R]
    T = X @ U
    S = Y @ V
    d = inner_coefficients(T, S)
    D = np.diag(d)
    Qt = outer_loadings(S, Y)
    Q = Qt.T
    P_load = np.linalg.solve(T.T @ T, T.T @ X).T
    beta = U @ D @ Q.T
    return PlsFit(
        R=R,
        U=U,
        V=V,
        g=svd.g[:R].copy(),
        T=T,
        S=S,
        D=D,
        Q=Q,
        P_load=P_load,
        beta=beta,
        H_resid=S - T @ D,
        Ey_resid=Y - X @ beta,
    )


def fit_pls(data, R):
    """Fit a two-block PLS model with `R` latent factors to centered `data`."""
    if not data.centered:
        raise InputError("fit_pls requires centered data; use center() first")
    data.check_centered()
    R = int(R)
    if not 1 <= R <= min(data.p, data.q):
        raise DimensionError(f"R={R} must lie in [1, {min(data.p, data.q)}]")
    return fit_arrays(data.X, data.Y, R)


def predict(fit, Xnew, data):
    """Predict responses for raw (uncentered) rows `Xnew` using the means in `data`."""
    Xnew = np.asarray(Xnew, dtype=np.float64)
    if Xnew.ndim == 1:
        Xnew = Xnew[None, :]
    if Xnew.shape[1] != fit.beta.shape[0]:
        raise DimensionError(
            f"Xnew has {Xnew.shape[1]} columns, model expects {fit.beta.shape[0]}"
        )
    return (Xnew - data.column_means_x) @ fit.beta + data.column_means_y
