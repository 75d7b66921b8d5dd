# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Must stay numerically equivalent to _fallback.py."""

import numpy as np

from libc.math cimport fabs, sqrt
from scipy.linalg.cython_blas cimport dgemv


def press_loop(const double[:, ::1] T, const double[:, ::1] S, const double[:, ::1] Y,
               const double[::1] d, const double[::1] tt, const double[:, ::1] Ps,
               const double[:, ::1] Qt):
    cdef Py_ssize_t n = T.shape[0], R = T.shape[1], q = Y.shape[1]
    cdef Py_ssize_t i, k, l, c
    cdef double t, s, ht, hs, aw, acc, rc, pred
    E = np.empty((n, q), dtype=np.float64)
    cdef double[:, ::1] Ev = E
    cdef double[::1] a = np.empty(R, dtype=np.float64)
    cdef double[::1] w = np.empty(R, dtype=np.float64)

    for i in range(n):
        for k in range(R):
            t = T[i, k]
            s = S[i, k]
            ht = t * t / tt[k]
            a[k] = t * (d[k] - (s - t * d[k]) * t / (tt[k] * (1.0 - ht)))
        hs = 0.0
        aw = 0.0
        for k in range(R):
            acc = 0.0
            for l in range(R):
                acc += Ps[k, l] * S[i, l]
            w[k] = acc
            hs += S[i, k] * acc
            aw += a[k] * acc
        for c in range(q):
            rc = Y[i, c]
            pred = 0.0
            for k in range(R):
                rc -= S[i, k] * Qt[k, c]
                pred += a[k] * Qt[k, c]
            Ev[i, c] = Y[i, c] - (pred - aw * rc / (1.0 - hs))
    return E


cdef inline void _matvec(const double[:, ::1] M, const double[::1] x, double[::1] y,
                         bint transpose) noexcept nogil:
    """``y = M @ x`` (or ``M.T @ x``) through BLAS on the row-major `M`."""
    # a C-contiguous (p, q) array is a column-major (q, p) matrix
    cdef int q = <int>M.shape[1], p = <int>M.shape[0], inc = 1
    cdef double one = 1.0, zero = 0.0
    cdef char trans = b'N' if transpose else b'T'
    dgemv(&trans, &q, &p, &one, <double*>&M[0, 0], &q, <double*>&x[0], &inc,
          &zero, &y[0], &inc)


def sparse_iterate(const double[:, ::1] M, const double[::1] u0, const double[::1] v0,
                   double gamma, double tol, int max_iter, bint trace):
    cdef Py_ssize_t p = M.shape[0], q = M.shape[1]
    cdef Py_ssize_t j, k
    cdef int it = 0
    cdef bint converged = False
    cdef double z, un, change, nrm, acc, normM2 = 0.0, uu, ul1
    cdef Py_ssize_t nnz

    u_arr = np.array(u0, dtype=np.float64)
    v_arr = np.array(v0, dtype=np.float64)
    mtu_arr = np.empty(q, dtype=np.float64)
    mv_arr = np.empty(p, dtype=np.float64)
    cdef double[::1] u = u_arr
    cdef double[::1] v = v_arr
    cdef double[::1] mtu = mtu_arr
    cdef double[::1] mv = mv_arr
    objective = None

    if trace:
        for j in range(p):
            for k in range(q):
                normM2 += M[j, k] * M[j, k]
        _matvec(M, v, mv, False)
        acc = 0.0
        uu = 0.0
        ul1 = 0.0
        for j in range(p):
            acc += u[j] * mv[j]
            uu += u[j] * u[j]
            ul1 += fabs(u[j])
        objective = [0.5 * normM2 - acc + 0.5 * uu + gamma * ul1]

    while it < max_iter:
        it += 1
        change = 0.0
        nnz = 0
        _matvec(M, v, mv, False)
        for j in range(p):
            z = mv[j]
            if z > gamma:
                un = z - gamma
            elif z < -gamma:
                un = z + gamma
            else:
                un = 0.0
            if fabs(un - u[j]) > change:
                change = fabs(un - u[j])
            u[j] = un
            if un != 0.0:
                nnz += 1
        if nnz == 0:
            converged = True
            if trace:
                objective.append(0.5 * normM2)
            break
        _matvec(M, u, mtu, True)
        nrm = 0.0
        for k in range(q):
            nrm += mtu[k] * mtu[k]
        nrm = sqrt(nrm)
        if nrm > 0.0:
            for k in range(q):
                v[k] = mtu[k] / nrm
        if trace:
            uu = 0.0
            ul1 = 0.0
            for j in range(p):
                uu += u[j] * u[j]
                ul1 += fabs(u[j])
            objective.append(0.5 * normM2 - nrm + 0.5 * uu + gamma * ul1)
        if change < tol:
            converged = True
            break

    if objective is not None:
        objective = np.asarray(objective)
    return u_arr, v_arr, it, converged, objective
