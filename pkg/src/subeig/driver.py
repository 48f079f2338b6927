"""Subspace iteration engine.

One outer iteration grows an orthonormal basis V by a correction
direction, updates W = A V and the projection H = V* A V, and
re-selects the tracked Ritz pair. When the basis reaches the configured
size the subspace collapses onto the current Ritz vector and the cycle
repeats. Convergence is a relative residual test against
scale = max(|lambda|, ||A||_F / sqrt(n)).
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .core import as_matrix, as_vector, is_hermitian, lstsq_minnorm, small_eig
from .corrections import CorrectionInput, StrategyConfig, solve_correction
from .errors import BreakdownError, LinearlyDependentError, SingularDiagonalError

__all__ = [
    "MODES",
    "SolverConfig",
    "SubspaceState",
    "Record",
    "ConvergenceHistory",
    "EigResult",
    "init",
    "dgks",
    "expand",
    "select_ritz",
    "pick_extremal",
    "restart",
    "run",
    "rqi_direction",
]

MODES = ("LR", "LM", "SR", "SM")

DEFAULT_ETA = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True)
class SolverConfig:
    mode: str
    strategy: StrategyConfig
    tol: float = 1e-10
    max_outer: int = 30
    max_restarts: int = 20
    reorth_eta: float = DEFAULT_ETA

    def __post_init__(self):
        object.__setattr__(self, "mode", self.mode.upper())
        if self.mode not in MODES:
            raise ValueError("mode must be one of %s" % (MODES,))
        if not isinstance(self.strategy, StrategyConfig):
            raise TypeError("strategy must be a StrategyConfig")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_outer < 2:
            raise ValueError("max_outer must be at least 2")
        if self.max_restarts < 0:
            raise ValueError("max_restarts must be nonnegative")
        if not 0.0 < self.reorth_eta < 1.0:
            raise ValueError("reorth_eta must lie in (0, 1)")


@dataclass
class SubspaceState:
    v: np.ndarray
    w: np.ndarray
    h: np.ndarray
    ritz_value: complex
    ritz_coeff: np.ndarray
    ritz_vector: np.ndarray
    residual: np.ndarray
    w_of_x: np.ndarray
    hermitian: bool

    @property
    def dim(self):
        return self.v.shape[1]


@dataclass
class Record:
    outer: int
    dim: int
    lam: complex
    rnorm: float
    kind: str
    wall_ms: float
    fallback: bool = False


@dataclass
class ConvergenceHistory:
    init_lam: complex = 0.0 + 0.0j
    init_rnorm: float = 0.0
    records: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    def __len__(self):
        return len(self.records)


@dataclass
class EigResult:
    converged: bool
    eigenvalue: complex
    eigenvector: np.ndarray
    iterations: int
    history: ConvergenceHistory


def init(a, x0):
    """One-dimensional starting state spanned by x0."""
    a = as_matrix(a)
    x0 = as_vector(x0)
    if a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if x0.shape[0] != a.shape[0]:
        raise ValueError("starting vector length does not match the matrix")
    nrm = np.linalg.norm(x0)
    if nrm == 0.0:
        raise ValueError("starting vector must be nonzero")
    hermitian = is_hermitian(a)
    x = x0 / nrm
    w = a @ x
    lam = np.vdot(x, w)
    if hermitian:
        lam = complex(lam.real)
    else:
        lam = complex(lam)
    r = w - lam * x
    h = np.array([[lam]], dtype=np.complex128)
    return SubspaceState(
        v=x.reshape(-1, 1).copy(),
        w=w.reshape(-1, 1).copy(),
        h=h,
        ritz_value=lam,
        ritz_coeff=np.ones(1, dtype=np.complex128),
        ritz_vector=x,
        residual=r,
        w_of_x=w,
        hermitian=hermitian,
    )


def dgks(v, t, eta=DEFAULT_ETA):
    """Orthonormalize t against the columns of v with a selective second
    Gram-Schmidt pass: reorthogonalize when the first pass removed so
    much that the remainder fell below eta times the input norm."""
    t = as_vector(t)
    tnorm = np.linalg.norm(t)
    if v.shape[1] == 0:
        if tnorm <= 1e-13 * max(tnorm, 1.0) or tnorm == 0.0:
            raise LinearlyDependentError("zero expansion vector")
        return t / tnorm
    vc = v.conj().T
    u = t - v @ (vc @ t)
    if np.linalg.norm(u) < eta * tnorm:
        u = u - v @ (vc @ u)
    unorm = np.linalg.norm(u)
    if unorm <= 1e-13 * tnorm:
        raise LinearlyDependentError(
            "expansion vector is numerically inside the current subspace")
    return u / unorm


def pick_extremal(values, mode):
    """Index of the eigenvalue extremal under mode, breaking near-ties
    by smaller imaginary part and then by position."""
    vals = np.asarray(values, dtype=np.complex128)
    if vals.size == 0:
        raise ValueError("no eigenvalues to select from")
    if mode == "LR":
        primary = -vals.real
    elif mode == "SR":
        primary = vals.real
    elif mode == "LM":
        primary = -np.abs(vals)
    elif mode == "SM":
        primary = np.abs(vals)
    else:
        raise ValueError("mode must be one of %s" % (MODES,))
    tol = 1e-12 * max(1.0, float(np.max(np.abs(vals))))
    cand = np.flatnonzero(primary <= primary.min() + tol)
    ims = vals[cand].imag
    cand = cand[ims <= ims.min() + tol]
    return int(cand[0])


def select_ritz(h, mode):
    """Eigenpair of the projected matrix extremal under mode."""
    dec = small_eig(h)
    idx = pick_extremal(dec.values, mode)
    y = dec.vectors[:, idx]
    y = y / np.linalg.norm(y)
    lam = complex(dec.values[idx])
    return lam, y


def expand(state, a, cfg):
    """One outer step: correction solve, DGKS append, projection update,
    Ritz re-selection. Returns (new_state, fallback_used)."""
    inp = CorrectionInput(a, state.ritz_vector, state.ritz_value, state.residual)
    fallback = False
    try:
        t = solve_correction(inp, cfg.strategy)
    except (BreakdownError, SingularDiagonalError):
        t = -state.residual
        fallback = True
    vnew = dgks(state.v, t, cfg.reorth_eta)
    wnew = a @ vnew
    j = state.dim
    n = state.v.shape[0]
    v1 = np.empty((n, j + 1), dtype=np.complex128)
    v1[:, :j] = state.v
    v1[:, j] = vnew
    w1 = np.empty((n, j + 1), dtype=np.complex128)
    w1[:, :j] = state.w
    w1[:, j] = wnew
    h1 = np.zeros((j + 1, j + 1), dtype=np.complex128)
    h1[:j, :j] = state.h
    col = state.v.conj().T @ wnew
    h1[:j, j] = col
    if state.hermitian:
        h1[j, :j] = np.conj(col)
        h1[j, j] = np.vdot(vnew, wnew).real
    else:
        h1[j, :] = vnew.conj() @ w1
    lam, y = select_ritz(h1, cfg.mode)
    if state.hermitian:
        lam = complex(lam.real)
    xraw = v1 @ y
    nu = np.linalg.norm(xraw)
    x = xraw / nu
    wy = (w1 @ y) / nu
    y = y / nu
    r = wy - lam * x
    new_state = SubspaceState(
        v=v1,
        w=w1,
        h=h1,
        ritz_value=lam,
        ritz_coeff=y,
        ritz_vector=x,
        residual=r,
        w_of_x=wy,
        hermitian=state.hermitian,
    )
    return new_state, fallback


def restart(state, a):
    """Collapse to the span of the current Ritz vector. W restarts as
    the bookkept A x, so no matvec happens and the Ritz value and
    residual carry over unchanged."""
    lam = state.ritz_value
    return SubspaceState(
        v=state.ritz_vector.reshape(-1, 1).copy(),
        w=state.w_of_x.reshape(-1, 1).copy(),
        h=np.array([[lam]], dtype=np.complex128),
        ritz_value=lam,
        ritz_coeff=np.ones(1, dtype=np.complex128),
        ritz_vector=state.ritz_vector,
        residual=state.residual,
        w_of_x=state.w_of_x,
        hermitian=state.hermitian,
    )


def _scale(a_fnorm_over_sqrt_n, lam):
    return max(abs(lam), a_fnorm_over_sqrt_n)


def run(a, x0, cfg, observer=None, timing=True):
    """Drive the iteration until the relative residual drops below
    cfg.tol or the restart budget is spent. Failure to converge is
    reported in the result, not raised.

    The observer, when given, is called as observer(state, record)
    after every executed expansion. With timing disabled the recorded
    wall times are zero, which keeps repeated runs byte-identical when
    serialized.
    """
    a = as_matrix(a)
    state = init(a, x0)
    n = a.shape[0]
    fbase = float(np.linalg.norm(a)) / np.sqrt(n)
    max_dim = min(cfg.max_outer, n)
    history = ConvergenceHistory(init_lam=state.ritz_value,
                                 init_rnorm=float(np.linalg.norm(state.residual)))
    rnorm = history.init_rnorm

    def result(converged):
        its = len(history.records) + len(history.skipped)
        return EigResult(converged, state.ritz_value, state.ritz_vector, its, history)

    if rnorm <= cfg.tol * _scale(fbase, state.ritz_value):
        return result(True)

    outer = 0
    restarts = 0
    while True:
        while state.dim < max_dim:
            outer += 1
            t0 = time.perf_counter() if timing else 0.0
            try:
                state, fallback = expand(state, a, cfg)
            except LinearlyDependentError as exc:
                history.skipped.append((outer, str(exc)))
                break
            wall_ms = (time.perf_counter() - t0) * 1e3 if timing else 0.0
            rnorm = float(np.linalg.norm(state.residual))
            rec = Record(outer, state.dim, state.ritz_value, rnorm,
                         cfg.strategy.name, wall_ms, fallback)
            history.records.append(rec)
            if observer is not None:
                observer(state, rec)
            if rnorm <= cfg.tol * _scale(fbase, state.ritz_value):
                return result(True)
        if restarts >= cfg.max_restarts:
            return result(False)
        state = restart(state, a)
        restarts += 1


def rqi_direction(a, lam, x):
    """Unit vector along (A - lam I)^-1 x, for shift values off the
    spectrum. Near-singular shifts still give a usable direction
    through the rank-truncated least-squares solve."""
    a = as_matrix(a)
    x = as_vector(x)
    m = a - complex(lam) * np.eye(a.shape[0], dtype=np.complex128)
    d = lstsq_minnorm(m, x)
    nrm = np.linalg.norm(d)
    if nrm == 0.0:
        raise ValueError("resolvent direction vanished")
    return d / nrm
