"""Dense linear-algebra kernels shared by the rest of the package.

Everything here is a pure function of its inputs. Tolerances quoted in the
docstrings are failure thresholds, never silent clamps.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, DimensionError, InputError, LeverageSingularityError

LEVERAGE_MARGIN = 1e-10
QR_PIVOT_RTOL = 1e-12


def as_matrix(A, name="matrix"):
    """Return `A` as a finite 2-D float64 array or raise."""
    A = np.asarray(A, dtype=np.float64)
    if A.ndim == 1:
        A = A[:, None]
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InputError(f"{name} contains NaN or Inf")
    return A


def fix_signs(U, V=None):
    """Flip columns so the largest-magnitude entry of each column of `U` is positive.

    Ties go to the lowest row index (``argmax`` semantics). `V` is flipped
    jointly when given. Operates on copies.
    """
    U = np.array(U, dtype=np.float64)
    idx = np.argmax(np.abs(U), axis=0)
    signs = np.sign(U[idx, np.arange(U.shape[1])])
    signs[signs == 0] = 1.0
    U *= signs
    if V is None:
        return U
    V = np.array(V, dtype=np.float64) * signs
    return U, V


@dataclass(frozen=True)
class SvdTruncated:
    """Leading `R` singular triplets: ``M ~= U @ diag(g) @ V.T``."""

    U: np.ndarray
    V: np.ndarray
    g: np.ndarray

    @property
    def rank(self):
        return self.g.shape[0]


def svd_truncated(M, R):
    """Top-`R` singular triplets of `M` under the package sign convention.

    Delegates to LAPACK (``gesdd``) and truncates; the thin decomposition is
    cheap for the p x q cross-products this package works with.
    """
    M = as_matrix(M, "M")
    R = int(R)
    if not 1 <= R <= min(M.shape):
        raise DimensionError(f"R={R} out of range for a {M.shape[0]}x{M.shape[1]} matrix")
    U, g, Vt = np.linalg.svd(M, full_matrices=False)
    U, V = fix_signs(U[:, :R], Vt[:R].T)
    return SvdTruncated(U=U, V=V, g=g[:R].copy())


def qr_orthonormalize(A):
    """Orthonormal basis for range(A), column order preserved (Gram-Schmidt order).

    Raises
    ------
    DegeneracyError
        If a pivot of the triangular factor is below ``1e-12`` times the norm
        of the corresponding input column.
    """
    A = as_matrix(A, "A")
    if A.shape[1] > A.shape[0]:
        raise DimensionError(f"cannot orthonormalize {A.shape[1]} columns in R^{A.shape[0]}")
    Q, Rf = np.linalg.qr(A)
    diag = np.diag(Rf)
    col_norms = np.linalg.norm(A, axis=0)
    bad = np.abs(diag) <= QR_PIVOT_RTOL * np.where(col_norms > 0, col_norms, 1.0)
    if np.any(bad):
        raise DegeneracyError(f"rank-deficient input: column {int(np.argmax(bad))} is dependent")
    # make diag(R) positive so Q matches classical Gram-Schmidt
    return Q * np.sign(diag)


@dataclass(frozen=True)
class SmwState:
    """An inverse Gram matrix `P` together with the Gram matrix it inverts."""

    P: np.ndarray
    gram: np.ndarray

    @classmethod
    def from_design(cls, A):
        A = as_matrix(A, "A")
        gram = A.T @ A
        return cls(P=np.linalg.inv(gram), gram=gram)


def smw_downdate(state, x):
    """Inverse of ``gram - x x^T`` from `state.P` by Sherman-Morrison.

    Returns
    -------
    P_down : ndarray, shape (R, R)
    leverage : float
        ``x^T P x``.

    Raises
    ------
    LeverageSingularityError
        If the leverage is within ``1e-10`` of one.
    """
    x = np.asarray(x, dtype=np.float64).ravel()
    P = state.P
    if x.shape[0] != P.shape[0]:
        raise DimensionError(f"x has length {x.shape[0]}, expected {P.shape[0]}")
    Px = P @ x
    h = float(x @ Px)
    if h >= 1.0 - LEVERAGE_MARGIN:
        raise LeverageSingularityError(f"leverage {h:.17g} too close to 1", leverage=h)
    return P + np.outer(Px, Px) / (1.0 - h), h
