import numpy as np
import pytest

from plspress import SimConfig, center, simulate


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_block(rng):
    """Centered n=100, p=q=20 Gaussian data with a weak shared signal."""
    Z = rng.standard_normal((100, 3))
    X = Z @ rng.standard_normal((3, 20)) + rng.standard_normal((100, 20))
    Y = Z @ rng.standard_normal((3, 20)) + rng.standard_normal((100, 20))
    return center(X, Y)


@pytest.fixture
def exact_sim():
    """Noise-free data whose PLS model with R=3 is exact."""
    return simulate(SimConfig(n=40, p=10, q=8, R_true=3, noise_sd=0.0, factor_corr=1.0, seed=3))


def deflated_power_singular_values(M, k, iters=5000, tol=1e-15):
    """Top-k singular values by power iteration on M^T M with deflation."""
    A = M.T @ M
    rng = np.random.default_rng(0)
    out = []
    for _ in range(k):
        x = rng.standard_normal(A.shape[0])
        lam = 0.0
        for _ in range(iters):
            y = A @ x
            lam_new = np.linalg.norm(y)
            x = y / lam_new
            if abs(lam_new - lam) <= tol * lam_new:
                break
            lam = lam_new
        lam = x @ A @ x
        out.append(np.sqrt(max(lam, 0.0)))
        A = A - lam * np.outer(x, x)
    return np.array(out)
