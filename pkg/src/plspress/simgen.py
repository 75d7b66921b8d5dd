"""Seeded synthetic data from the two-block latent-factor model.

Random streams come from NumPy's counter-based Philox generator keyed by a
``SeedSequence``; trial `k` of an experiment seeded with `s` uses spawn key
``(k,)``, so trials can run in any order or in parallel.
"""

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DimensionError
from .numkernel import qr_orthonormalize
from .pls import DataBlock, center


def make_rng(seed, stream=()):
    """Philox generator for `seed` on the sub-stream `stream` (a tuple of ints)."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))


def draw_R(rng):
    """True factor count, uniform on {2, ..., 8}."""
    return int(rng.integers(2, 9))


def draw_j(rng):
    """Sparsity divisor, uniform on [1, 2]; ``round(p / j)`` weights are nonzero."""
    return float(rng.uniform(1.0, 2.0))


def default_cov_schedule(R):
    return tuple(10.0 * 0.7**r for r in range(R))


@dataclass(frozen=True)
class SimConfig:
    """Parameters of one simulated dataset.

    `cov_schedule` gives the covariance of each (t_r, s_r) pair; both factors
    have variance ``cov / factor_corr``. With ``factor_corr = 1`` the pair is
    degenerate (``s_r - t_r`` is constant) and, with ``noise_sd = 0``, the
    PLS model fits exactly.
    """

    n: int
    p: int
    q: int
    R_true: int
    sparsity_j: float | None = None
    noise_sd: float = 1.0
    seed: int = 0
    cov_schedule: tuple | None = None
    factor_corr: float = 0.9
    mean_range: tuple = (0.0, 5.0)

    def __post_init__(self):
        if self.cov_schedule is None:
            object.__setattr__(self, "cov_schedule", default_cov_schedule(self.R_true))
        object.__setattr__(self, "cov_schedule", tuple(float(c) for c in self.cov_schedule))
        if min(self.n, self.p, self.q, self.R_true) < 1:
            raise DimensionError("n, p, q and R_true must be positive")
        if self.R_true > min(self.p, self.q):
            raise DimensionError(f"R_true={self.R_true} exceeds min(p, q)")
        cov = np.asarray(self.cov_schedule)
        if len(cov) != self.R_true:
            raise ValueError(f"cov_schedule needs {self.R_true} entries, got {len(cov)}")
        if np.any(cov <= 0) or np.any(np.diff(cov) >= 0):
            raise ValueError("cov_schedule must be positive and strictly descending")
        if not 0 < self.factor_corr <= 1:
            raise ValueError("factor_corr must lie in (0, 1]")
        if self.noise_sd < 0:
            raise ValueError("noise_sd must be non-negative")
        if self.sparsity_j is not None:
            if self.sparsity_j < 1:
                raise ValueError("sparsity_j must be at least 1")
            if self.support_size < self.R_true:
                raise DimensionError(
                    f"support of size {self.support_size} cannot hold {self.R_true} factors"
                )

    @property
    def support_size(self):
        if self.sparsity_j is None:
            return self.p
        return int(round(self.p / self.sparsity_j))

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class SimTruth:
    U_true: np.ndarray
    V_true: np.ndarray
    T_true: np.ndarray
    S_true: np.ndarray
    support_true: np.ndarray
    U_raw: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class SimData:
    data: DataBlock
    truth: SimTruth
    config: SimConfig
    X_raw: np.ndarray = field(repr=False)
    Y_raw: np.ndarray = field(repr=False)


def simulate(config):
    """Draw one dataset; identical configs give bitwise-identical output."""
    rng = make_rng(config.seed)
    n, p, q, R = config.n, config.p, config.q, config.R_true
    rho = config.factor_corr
    T = np.empty((n, R))
    S = np.empty((n, R))
    lo, hi = config.mean_range
    for r, cov in enumerate(config.cov_schedule):
        mt, ms = rng.uniform(lo, hi, size=2)
        sd = np.sqrt(cov / rho)
        z1 = rng.standard_normal(n)
        z2 = rng.standard_normal(n)
        T[:, r] = mt + sd * z1
        S[:, r] = ms + sd * (rho * z1 + np.sqrt(1.0 - rho * rho) * z2)

    U_raw = rng.uniform(0.0, 1.0, size=(p, R))
    V_raw = rng.uniform(0.0, 1.0, size=(q, R))
    if config.sparsity_j is not None:
        support = np.sort(rng.choice(p, size=config.support_size, replace=False))
        mask = np.zeros(p, dtype=bool)
        mask[support] = True
        U_raw[~mask] = 0.0
    else:
        support = np.arange(p)

    if config.sparsity_j is not None and R == 1:
        # QR would be a plain normalization here; keep the zeros exact
        U = U_raw / np.linalg.norm(U_raw[:, 0])
    else:
        U = qr_orthonormalize(U_raw)
    V = qr_orthonormalize(V_raw)

    X = T @ U.T
    Y = S @ V.T
    if config.noise_sd > 0:
        X = X + config.noise_sd * rng.standard_normal((n, p))
        Y = Y + config.noise_sd * rng.standard_normal((n, q))
    truth = SimTruth(U_true=U, V_true=V, T_true=T, S_true=S, support_true=support, U_raw=U_raw)
    return SimData(data=center(X, Y), truth=truth, config=config, X_raw=X, Y_raw=Y)
