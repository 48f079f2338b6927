"""Dense subspace eigensolvers with swappable correction equations."""

from .backend import BACKEND
from .core import (
    EigDecomposition,
    inner,
    is_hermitian,
    lstsq_minnorm,
    lu_solve,
    matvec,
    small_eig,
)
from .corrections import (
    CorrectionInput,
    StrategyConfig,
    grad_rq,
    hess_rq,
    rayleigh_quotient,
    solve_correction,
)
from .driver import (
    ConvergenceHistory,
    EigResult,
    SolverConfig,
    SubspaceState,
    dgks,
    expand,
    init,
    restart,
    rqi_direction,
    run,
    select_ritz,
)
from .matio import ModelSpec, MtxHeader, gen_model, parse_matrix_market, symmetrize

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConvergenceHistory",
    "CorrectionInput",
    "EigDecomposition",
    "EigResult",
    "ModelSpec",
    "MtxHeader",
    "SolverConfig",
    "StrategyConfig",
    "SubspaceState",
    "dgks",
    "expand",
    "gen_model",
    "grad_rq",
    "hess_rq",
    "init",
    "inner",
    "is_hermitian",
    "lstsq_minnorm",
    "lu_solve",
    "matvec",
    "parse_matrix_market",
    "rayleigh_quotient",
    "restart",
    "rqi_direction",
    "run",
    "select_ritz",
    "small_eig",
    "solve_correction",
    "symmetrize",
]
