"""Rayleigh-quotient calculus and correction-equation strategies.

Every strategy maps a CorrectionInput (matrix, Ritz vector, Ritz value,
residual) to an expansion direction t for the subspace driver.  The
operators are materialized densely and handed to the direct solvers in
``core``; at the target sizes this is both simple and fast.

A note on the generalized family: its defining equation
(I - a xx*)(A - l I)(I - b xx*) t = -r carries the side constraint
t perp x.  Folding the constraint in turns the equation into the
bordered system [[A - l I, -x], [-x*, 0]] [t; eta] = [-r; 0] whose
solution -x + eta*x_R is the same for every nonzero a, so that is what
solve_generalized computes.  Without the constraint the solution
degenerates to a multiple of x whenever a != 1 (and the residual is
orthogonal to x), which is also why the plain Newton variants n1/n2
expand so poorly: they are kept unconstrained on purpose so the solver
comparison can show it.
"""

from dataclasses import dataclass

import numpy as np

from .core import as_matrix, as_vector, inner, is_hermitian, lstsq_minnorm, lu_solve
from .errors import BreakdownError, SingularDiagonalError, SingularMatrixError

__all__ = [
    "KINDS",
    "CorrectionInput",
    "StrategyConfig",
    "rayleigh_quotient",
    "grad_rq",
    "hess_rq",
    "solve_davidson",
    "solve_jd",
    "solve_jdm",
    "solve_iigd",
    "solve_iigdm",
    "solve_n1",
    "solve_n2",
    "solve_generalized",
    "solve_bordered",
    "solve_correction",
]

KINDS = ("davidson", "jd", "jdm", "iigd", "iigdm", "n1", "n2", "generalized", "bordered")

_TINY = 1e-14


@dataclass
class CorrectionInput:
    """State handed to a correction solve: A, unit Ritz vector x, Ritz
    value lam, and the bookkept residual r = A x - lam x."""

    a: np.ndarray
    x: np.ndarray
    lam: complex
    r: np.ndarray

    def __post_init__(self):
        self.a = as_matrix(self.a)
        self.x = as_vector(self.x)
        self.r = as_vector(self.r)
        self.lam = complex(self.lam)
        nx = np.linalg.norm(self.x)
        if abs(nx - 1.0) > 1e-9:
            raise ValueError("Ritz vector must have unit norm, got %.3e" % nx)


@dataclass(frozen=True)
class StrategyConfig:
    kind: str
    alpha: complex = 1.0 + 0.0j
    beta: complex = 0.0 + 0.0j
    diag_precond: bool = False
    enforce_orth: bool = False
    allow_nonhermitian: bool = False
    label: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError("unknown strategy kind %r" % self.kind)
        if self.kind == "generalized" and self.alpha == 0:
            raise ValueError("generalized strategy requires alpha != 0")

    @property
    def name(self):
        return self.label or self.kind


def rayleigh_quotient(a, x):
    a = as_matrix(a)
    x = as_vector(x)
    xx = np.vdot(x, x).real
    if xx == 0.0:
        raise ValueError("Rayleigh quotient of the zero vector")
    return complex(np.vdot(x, a @ x) / xx)


def grad_rq(a, x):
    """Gradient of the Rayleigh quotient, (2/x*x)(Ax - Q(x) x).

    Only meaningful for Hermitian A, where the quotient is a smooth
    real-valued function; non-Hermitian input is rejected.
    """
    a = as_matrix(a)
    x = as_vector(x)
    if not is_hermitian(a):
        raise ValueError("gradient formula requires a Hermitian matrix")
    xx = np.vdot(x, x).real
    if xx == 0.0:
        raise ValueError("gradient at the zero vector")
    q = rayleigh_quotient(a, x)
    return (2.0 / xx) * (a @ x - q * x)


def hess_rq(a, x):
    """Hessian of the Rayleigh quotient at a unit vector:
    2(A - lam I) - 4(A xx* + xx* A* - 2 lam xx*)."""
    a = as_matrix(a)
    x = as_vector(x)
    if not is_hermitian(a):
        raise ValueError("Hessian formula requires a Hermitian matrix")
    if abs(np.linalg.norm(x) - 1.0) > 1e-10:
        raise ValueError("Hessian formula assumes a unit vector")
    lam = rayleigh_quotient(a, x)
    ax = a @ x
    xc = np.conj(x)
    h = 2.0 * (a - lam * np.eye(a.shape[0]))
    h -= 4.0 * (np.outer(ax, xc) + np.outer(x, np.conj(ax)) - 2.0 * lam * np.outer(x, xc))
    return h


def _project_out(x, t):
    return t - x * np.vdot(x, t)


def _shifted(inp, use_diag):
    n = inp.a.shape[0]
    if use_diag:
        return np.diag(np.diag(inp.a)) - inp.lam * np.eye(n, dtype=np.complex128)
    return inp.a - inp.lam * np.eye(n, dtype=np.complex128)


def _sandwich(m, x, alpha, beta):
    """(I - alpha xx*) m (I - beta xx*) materialized with rank-1 updates."""
    xc = np.conj(x)
    xm = xc @ m
    mx = m @ x
    xmx = xc @ mx
    out = m - alpha * np.outer(x, xm) - beta * np.outer(mx, xc)
    out += (alpha * beta * xmx) * np.outer(x, xc)
    return out


def solve_davidson(inp, enforce_orth=False):
    """Diagonal-preconditioned residual: t_i = -r_i / (a_ii - lam)."""
    d = np.diag(inp.a) - inp.lam
    amax = np.max(np.abs(inp.a))
    small = np.abs(d) < _TINY * amax
    if np.any(small):
        raise SingularDiagonalError(int(np.argmax(small)))
    t = -inp.r / d
    if enforce_orth:
        t = _project_out(inp.x, t)
    return t


def solve_jd(inp, enforce_orth=False):
    """Projected correction equation (I-xx*)(A-lam I)(I-xx*) t = -r.

    The operator is singular by construction; the minimum-norm
    least-squares solution lands in the row space and is therefore
    already orthogonal to x.
    """
    b = _sandwich(_shifted(inp, False), inp.x, 1.0, 1.0)
    t = lstsq_minnorm(b, -inp.r)
    if enforce_orth:
        t = _project_out(inp.x, t)
    return t


def solve_jdm(inp):
    """One-sided projection (I-xx*)(A-lam I) t = -r, then t projected
    against x since the subspace step needs t perp x."""
    b = _sandwich(_shifted(inp, False), inp.x, 1.0, 0.0)
    t = lstsq_minnorm(b, -inp.r)
    return _project_out(inp.x, t)


def solve_iigd(inp, enforce_orth=False):
    """Two-solve form: t = -u + tau v with u = (A-lam)^-1 r,
    v = (A-lam)^-1 x and tau = (x*u)/(x*v)."""
    m = _shifted(inp, False)
    u = lstsq_minnorm(m, inp.r)
    v = lstsq_minnorm(m, inp.x)
    xv = np.vdot(inp.x, v)
    if abs(xv) <= _TINY * np.linalg.norm(v):
        raise BreakdownError("x is orthogonal to the shifted solve of x (tau undefined)")
    tau = np.vdot(inp.x, u) / xv
    t = -u + tau * v
    if enforce_orth:
        t = _project_out(inp.x, t)
    return t


def solve_iigdm(inp, enforce_orth=False):
    """One-solve form: s = (A-lam)^-1 x, eta = 1/(x*s), t = eta s - x.

    The formula makes t orthogonal to x analytically; a final explicit
    projection keeps the computed inner product at roundoff.
    """
    m = _shifted(inp, False)
    s = lstsq_minnorm(m, inp.x)
    xs = np.vdot(inp.x, s)
    if abs(xs) <= _TINY * np.linalg.norm(s):
        raise BreakdownError("x is orthogonal to the shifted solve of x (eta undefined)")
    eta = 1.0 / xs
    t = eta * s - inp.x
    t = _project_out(inp.x, t)
    if enforce_orth:
        t = _project_out(inp.x, t)
    return t


def _require_newton_input(inp, cfg, who):
    if cfg.allow_nonhermitian:
        return
    if not is_hermitian(inp.a):
        raise ValueError("%s is derived for Hermitian matrices "
                         "(pass allow_nonhermitian to override)" % who)
    if abs(inp.lam.imag) > 1e-12 * max(1.0, abs(inp.lam)):
        raise ValueError("%s needs a real Ritz value, got imaginary part %.3e"
                         % (who, inp.lam.imag))


def solve_n1(inp, cfg):
    """Newton correction with the rank-2 form of the Hessian term:
    (A - lam I - 2(r x* + x r*)) t = -r, optionally with diag(A) as the
    leading term."""
    _require_newton_input(inp, cfg, "the Newton correction")
    xc = np.conj(inp.x)
    b = _shifted(inp, cfg.diag_precond)
    b -= 2.0 * (np.outer(inp.r, xc) + np.outer(inp.x, np.conj(inp.r)))
    t = lstsq_minnorm(b, -inp.r)
    if cfg.enforce_orth:
        t = _project_out(inp.x, t)
    return t


def solve_n2(inp, cfg):
    """Reflector-conjugated Newton correction
    (I-2xx*)(A-lam I)(I-2xx*) t = -r; the reflector is involutory so the
    operator is as well conditioned as A - lam I itself."""
    _require_newton_input(inp, cfg, "the reflected Newton correction")
    b = _sandwich(_shifted(inp, cfg.diag_precond), inp.x, 2.0, 2.0)
    try:
        t = lu_solve(b, -inp.r)
    except SingularMatrixError:
        t = lstsq_minnorm(b, -inp.r)
    if cfg.enforce_orth:
        t = _project_out(inp.x, t)
    return t


def solve_bordered(inp):
    """Bordered system [[A - lam I, -x], [-x*, 0]] [t; eta] = [-r; 0].

    Stays nonsingular even when lam is a simple eigenvalue, and the
    constraint row keeps t orthogonal to x exactly."""
    n = inp.a.shape[0]
    m = np.zeros((n + 1, n + 1), dtype=np.complex128)
    m[:n, :n] = _shifted(inp, False)
    m[:n, n] = -inp.x
    m[n, :n] = -np.conj(inp.x)
    rhs = np.zeros(n + 1, dtype=np.complex128)
    rhs[:n] = -inp.r
    sol = lu_solve(m, rhs)
    return sol[:n], complex(sol[n])


def solve_generalized(inp, alpha, beta):
    """Parametrized projected equation, solved with its t perp x
    constraint; see the module docstring for why the constrained
    solution does not depend on (alpha, beta)."""
    if alpha == 0:
        raise ValueError("generalized correction requires alpha != 0")
    t, _ = solve_bordered(inp)
    return _project_out(inp.x, t)


def solve_correction(inp, cfg):
    """Dispatch a StrategyConfig to its solver; returns the direction t."""
    kind = cfg.kind
    if kind == "davidson":
        return solve_davidson(inp, cfg.enforce_orth)
    if kind == "jd":
        return solve_jd(inp, cfg.enforce_orth)
    if kind == "jdm":
        return solve_jdm(inp)
    if kind == "iigd":
        return solve_iigd(inp, cfg.enforce_orth)
    if kind == "iigdm":
        return solve_iigdm(inp, cfg.enforce_orth)
    if kind == "n1":
        return solve_n1(inp, cfg)
    if kind == "n2":
        return solve_n2(inp, cfg)
    if kind == "generalized":
        return solve_generalized(inp, cfg.alpha, cfg.beta)
    if kind == "bordered":
        return solve_bordered(inp)[0]
    raise ValueError("unknown strategy kind %r" % kind)
