"""Self-contained dense complex linear algebra.

Everything downstream (orthogonalization, projected eigenproblems,
correction-equation solves) reduces to the operations here.  All
computation is complex double precision; matrices are plain numpy
arrays.  The dense size cap keeps this honest desk-scale code.
"""

from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import NonConvergenceError, SingularMatrixError
from .rng import SplitMix64

__all__ = [
    "DENSE_CAP",
    "EigDecomposition",
    "matvec",
    "inner",
    "is_hermitian",
    "lu_solve",
    "lstsq_minnorm",
    "small_eig",
]

DENSE_CAP = 2000

_EPS = np.finfo(np.float64).eps


def as_matrix(a, name="matrix"):
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError("%s must be two-dimensional" % name)
    return a


def as_vector(x, name="vector"):
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim != 1:
        raise ValueError("%s must be one-dimensional" % name)
    return x


def matvec(a, x):
    a = as_matrix(a)
    x = as_vector(x)
    if a.shape[1] != x.shape[0]:
        raise ValueError("shape mismatch: %s by %s" % (a.shape, x.shape))
    return a @ x


def inner(x, y):
    """Euclidean inner product, conjugate-linear in the first argument."""
    x = as_vector(x)
    y = as_vector(y)
    if x.shape != y.shape:
        raise ValueError("shape mismatch: %s by %s" % (x.shape, y.shape))
    return complex(np.vdot(x, y))


def is_hermitian(a, rtol=1e-13):
    """Entrywise check of a against its conjugate transpose."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    scale = np.max(np.abs(a)) if a.size else 0.0
    if scale == 0.0:
        return True
    return np.max(np.abs(a - a.conj().T)) <= rtol * scale


def _require_square(a, name="matrix"):
    a = as_matrix(a, name)
    if a.shape[0] != a.shape[1]:
        raise ValueError("%s must be square, got %s" % (name, (a.shape,)))
    if a.shape[0] > DENSE_CAP:
        raise ValueError("%s order %d exceeds the dense cap %d" % (name, a.shape[0], DENSE_CAP))
    return a


def _lu_factor(a):
    """In-place LU with partial pivoting; returns (lu, piv, nswaps)."""
    lu = np.array(a, dtype=np.complex128, copy=True)
    n = lu.shape[0]
    piv = np.arange(n)
    nswaps = 0
    scale = np.max(np.abs(lu)) if n else 0.0
    tol = n * _EPS * scale
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if abs(lu[p, k]) <= tol:
            raise SingularMatrixError(k)
        if p != k:
            lu[[k, p], :] = lu[[p, k], :]
            piv[[k, p]] = piv[[p, k]]
            nswaps += 1
        lu[k + 1 :, k] /= lu[k, k]
        if k + 1 < n:
            lu[k + 1 :, k + 1 :] -= np.outer(lu[k + 1 :, k], lu[k, k + 1 :])
    return lu, piv, nswaps


def lu_solve(a, b):
    """Solve a x = b by LU with partial pivoting.

    Raises SingularMatrixError (with the pivot index) when a pivot falls
    below n*eps*max|a|.
    """
    a = _require_square(a)
    b = as_vector(b, "right-hand side")
    n = a.shape[0]
    if b.shape[0] != n:
        raise ValueError("shape mismatch: %s by %s" % (a.shape, b.shape))
    lu, piv, _ = _lu_factor(a)
    y = b[piv].astype(np.complex128)
    for k in range(1, n):
        y[k] -= lu[k, :k] @ y[:k]
    for k in range(n - 1, -1, -1):
        y[k] = (y[k] - lu[k, k + 1 :] @ y[k + 1 :]) / lu[k, k]
    return y


def _householder_qr(a, pivot):
    """Householder QR, optionally with column pivoting.

    Returns (r, reflectors, jpvt) where reflectors is a list of
    (offset, v, beta) triples applied left-to-right.
    """
    r = np.array(a, dtype=np.complex128, copy=True)
    m, n = r.shape
    jpvt = np.arange(n)
    refl = []
    for k in range(min(m, n)):
        if pivot:
            norms = np.linalg.norm(r[k:, k:], axis=0)
            j = k + int(np.argmax(norms))
            if j != k:
                r[:, [k, j]] = r[:, [j, k]]
                jpvt[[k, j]] = jpvt[[j, k]]
        x = r[k:, k]
        normx = np.linalg.norm(x)
        if normx == 0.0:
            continue
        alpha = x[0]
        phase = alpha / abs(alpha) if alpha != 0.0 else 1.0
        v = x.copy()
        v[0] += phase * normx
        vv = np.vdot(v, v).real
        if vv == 0.0:
            continue
        beta = 2.0 / vv
        r[k:, k:] -= beta * np.outer(v, np.conj(v) @ r[k:, k:])
        r[k + 1 :, k] = 0.0
        refl.append((k, v, beta))
    return r, refl, jpvt


def _apply_q_conj(refl, b):
    """b <- Q* b for Q given by the stored reflectors."""
    y = np.array(b, dtype=np.complex128, copy=True)
    for k, v, beta in refl:
        y[k:] -= beta * v * np.vdot(v, y[k:])
    return y


def _q_columns(refl, m, ncols):
    """First ncols columns of Q."""
    q = np.eye(m, ncols, dtype=np.complex128)
    for k, v, beta in reversed(refl):
        q[k:, :] -= beta * np.outer(v, np.conj(v) @ q[k:, :])
    return q


def lstsq_minnorm(a, b):
    """Minimum-norm least-squares solution via column-pivoted QR.

    Numerical rank is decided by the diagonal of R with cutoff
    max(m, n) * eps * max|R_kk|; the min-norm step factors the leading
    rank rows of R a second time.
    """
    a = as_matrix(a)
    b = as_vector(b, "right-hand side")
    m, n = a.shape
    if b.shape[0] != m:
        raise ValueError("shape mismatch: %s by %s" % (a.shape, b.shape))
    if max(m, n) > DENSE_CAP:
        raise ValueError("matrix order %d exceeds the dense cap %d" % (max(m, n), DENSE_CAP))
    r, refl, jpvt = _householder_qr(a, pivot=True)
    k = min(m, n)
    diag = np.abs(np.diag(r)[:k])
    rmax = diag.max() if k else 0.0
    rank = int(np.sum(diag > max(m, n) * _EPS * rmax)) if rmax > 0.0 else 0
    x = np.zeros(n, dtype=np.complex128)
    if rank == 0:
        return x
    qtb = _apply_q_conj(refl, b)[:rank]
    r1 = r[:rank, :]
    # min-norm: factor r1* = q2 r2, so r1 = r2* q2* with r2* lower triangular
    r2, refl2, _ = _householder_qr(r1.conj().T, pivot=False)
    ell = r2[:rank, :rank].conj().T
    y = np.zeros(rank, dtype=np.complex128)
    for i in range(rank):
        y[i] = (qtb[i] - ell[i, :i] @ y[:i]) / ell[i, i]
    w = _q_columns(refl2, n, rank) @ y
    x[jpvt] = w
    return x


@dataclass
class EigDecomposition:
    """Full dense spectrum: values[k] pairs with vectors[:, k]."""

    values: np.ndarray
    vectors: np.ndarray
    converged: bool


def _triangular_eigvecs(t, z, values):
    """Eigenvectors from a Schur form by one inverse-iteration step.

    Solves (t - lambda) y = b for a deterministic random b by
    back-substitution with regularized pivots, then maps back through z.
    A couple of retries with a perturbed shift cover pathological starts.
    """
    n = t.shape[0]
    vecs = np.empty((n, n), dtype=np.complex128)
    tnorm = np.linalg.norm(t)
    if tnorm == 0.0:
        tnorm = 1.0
    smlnum = _EPS * tnorm
    rng = SplitMix64(0x5EED5EED)
    for k in range(n):
        lam = values[k]
        shift = lam
        for attempt in range(3):
            b = rng.uniform(n) - 0.5 + 1j * (rng.uniform(n) - 0.5)
            y = b.astype(np.complex128)
            big = 1.0 / _EPS
            for i in range(n - 1, -1, -1):
                y[i] -= t[i, i + 1 :] @ y[i + 1 :]
                d = t[i, i] - shift
                if abs(d) < smlnum:
                    d = smlnum if d == 0.0 else (d / abs(d)) * smlnum
                y[i] /= d
                ymax = np.max(np.abs(y[i:]))
                if ymax > big:
                    y /= ymax
            ny = np.linalg.norm(y)
            if ny == 0.0 or not np.isfinite(ny):
                shift = lam + (attempt + 1) * smlnum * (1.0 + 1.0j)
                continue
            y /= ny
            break
        else:
            y = np.zeros(n, dtype=np.complex128)
            y[k] = 1.0
        v = z @ y
        nv = np.linalg.norm(v)
        if nv > 0.0:
            v /= nv
        vecs[:, k] = v
    return vecs


def small_eig(h, hermitian=None, max_sweeps=None):
    """Full spectrum of a dense matrix.

    Hermitian input goes through cyclic Jacobi rotations; the general
    path reduces to Hessenberg form and runs shifted QR, extracting
    eigenvectors from the triangular factor.  When the sweep budget
    (default 30 n) is exhausted a NonConvergenceError carries the
    partial decomposition.
    """
    h = _require_square(h)
    n = h.shape[0]
    if hermitian is None:
        hermitian = is_hermitian(h)
    elif hermitian and not is_hermitian(h):
        raise ValueError("hermitian flag set on a non-Hermitian matrix")
    if n == 0:
        return EigDecomposition(np.zeros(0, dtype=np.complex128), np.zeros((0, 0), dtype=np.complex128), True)
    if hermitian:
        sweeps = 30 if max_sweeps is None else max_sweeps
        w, v, ok = backend.jacobi_hermitian(h, sweeps)
        dec = EigDecomposition(w.astype(np.complex128), v, bool(ok))
        if not ok:
            raise NonConvergenceError(dec)
        return dec
    budget = 30 * n if max_sweeps is None else max_sweeps
    hess, q = backend.hessenberg(h)
    t, z, ok = backend.hessenberg_eig(hess, q, budget)
    values = np.diag(t).copy()
    vectors = _triangular_eigvecs(t, z, values)
    dec = EigDecomposition(values, vectors, bool(ok))
    if not ok:
        raise NonConvergenceError(dec)
    return dec
