"""Two-block PLS regression with an analytic leave-one-out (PRESS) statistic."""

from ._backend import BACKEND
from .errors import (
    DegeneracyError,
    DimensionError,
    InputError,
    LeverageSingularityError,
    PlsPressError,
)
from .modelselect import (
    SelectionResult,
    SensitivityRecord,
    select_gamma,
    select_R,
    sensitivity_experiment,
)
from .numkernel import SmwState, SvdTruncated, qr_orthonormalize, smw_downdate, svd_truncated
from .pls import DataBlock, PlsFit, center, fit_pls, predict
from .press import (
    PerturbationReport,
    PressResult,
    loocv_pls_fixed_subspace,
    loocv_pls_full,
    press_ols,
    press_pls,
    sv_perturbation_gap,
)
from .simgen import SimConfig, SimData, draw_j, draw_R, make_rng, simulate
from .sparse import SparseFit, gamma_grid, soft_threshold, sparse_beta, sparse_rank_one

__version__ = "0.1.0"
