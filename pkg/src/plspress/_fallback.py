"""Pure NumPy versions of the compiled kernels in _kernels.pyx."""

import numpy as np


def press_loop(T, S, Y, d, tt, Ps, Qt):
    t2 = T * T
    ht = t2 / tt
    d_loo = d - (S - T * d) * T / (tt * (1.0 - ht))
    A = T * d_loo
    W = S @ Ps
    hs = np.einsum("ij,ij->i", W, S)
    aw = np.einsum("ij,ij->i", A, W)
    resid = Y - S @ Qt
    pred = A @ Qt - (aw / (1.0 - hs))[:, None] * resid
    return Y - pred


def _soft(z, gamma):
    return np.sign(z) * np.maximum(np.abs(z) - gamma, 0.0)


def sparse_iterate(M, u0, v0, gamma, tol, max_iter, trace):
    u = np.array(u0, dtype=np.float64)
    v = np.array(v0, dtype=np.float64)
    objective = None
    if trace:
        normM2 = float(np.sum(M * M))
        objective = [0.5 * normM2 - u @ (M @ v) + 0.5 * (u @ u) + gamma * np.abs(u).sum()]
    it = 0
    converged = False
    while it < max_iter:
        it += 1
        un = _soft(M @ v, gamma)
        change = np.max(np.abs(un - u))
        u = un
        if not np.any(u):
            converged = True
            if trace:
                objective.append(0.5 * normM2)
            break
        mtu = M.T @ u
        nrm = np.sqrt(mtu @ mtu)
        if nrm > 0.0:
            v = mtu / nrm
        if trace:
            objective.append(0.5 * normM2 - nrm + 0.5 * (u @ u) + gamma * np.abs(u).sum())
        if change < tol:
            converged = True
            break
    if objective is not None:
        objective = np.asarray(objective)
    return u, v, it, converged, objective
