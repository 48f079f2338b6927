"""Dense eigensolver kernels, numpy implementation.

This is the fallback backend; ``subeig._accel`` implements the same three
functions in Cython with identical contracts.  Everything works on square
complex128 matrices.

hessenberg(a)            -> (h, q)       with a = q h q*, h upper Hessenberg
hessenberg_eig(h, q, m)  -> (t, z, ok)   with a = z t z*, t upper triangular
jacobi_hermitian(a, m)   -> (w, v, ok)   with a = v diag(w) v*, w real
"""

import numpy as np

__all__ = ["hessenberg", "hessenberg_eig", "jacobi_hermitian"]

_EPS = np.finfo(np.float64).eps


def hessenberg(a):
    """Householder reduction to upper Hessenberg form."""
    h = np.array(a, dtype=np.complex128, order="C", copy=True)
    n = h.shape[0]
    q = np.eye(n, dtype=np.complex128)
    for k in range(n - 2):
        x = h[k + 1 :, k]
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
        # similarity transform by the reflector I - beta v v*
        h[k + 1 :, k:] -= beta * np.outer(v, np.conj(v) @ h[k + 1 :, k:])
        h[:, k + 1 :] -= beta * np.outer(h[:, k + 1 :] @ v, np.conj(v))
        q[:, k + 1 :] -= beta * np.outer(q[:, k + 1 :] @ v, np.conj(v))
        h[k + 2 :, k] = 0.0
    return h, q


def _givens(a, b):
    """c real, s complex with [[c, s], [-conj(s), c]] @ (a, b) = (r, 0)."""
    if b == 0.0:
        return 1.0, 0.0 + 0.0j
    if a == 0.0:
        return 0.0, np.conj(b) / abs(b)
    d = np.hypot(abs(a), abs(b))
    c = abs(a) / d
    s = (a / abs(a)) * np.conj(b) / d
    return c, s


def _wilkinson(a, b, c, d):
    """Eigenvalue of [[a, b], [c, d]] closer to d."""
    delta = 0.5 * (a - d)
    disc = np.sqrt(delta * delta + b * c)
    den1 = delta + disc
    den2 = delta - disc
    den = den1 if abs(den1) >= abs(den2) else den2
    if den == 0.0:
        return d
    return d - b * c / den


def hessenberg_eig(h, q, max_steps):
    """Single-shift QR with deflation on an upper Hessenberg matrix.

    Returns the Schur form (t, z, ok) with the input's similarity
    accumulated on top of q.  ok is False when the step budget ran out.
    """
    t = np.array(h, dtype=np.complex128, copy=True)
    z = np.array(q, dtype=np.complex128, copy=True)
    n = t.shape[0]
    if n == 0:
        return t, z, True
    fnorm = np.linalg.norm(t)
    hi = n - 1
    total = 0
    local = 0
    while hi > 0:
        s = abs(t[hi - 1, hi - 1]) + abs(t[hi, hi])
        if s == 0.0:
            s = fnorm
        if abs(t[hi, hi - 1]) <= _EPS * s:
            t[hi, hi - 1] = 0.0
            hi -= 1
            local = 0
            continue
        lo = hi
        while lo > 0:
            s = abs(t[lo - 1, lo - 1]) + abs(t[lo, lo])
            if s == 0.0:
                s = fnorm
            if abs(t[lo, lo - 1]) <= _EPS * s:
                t[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            local = 0
            continue
        if total >= max_steps:
            return t, z, False
        total += 1
        local += 1
        if local % 10 == 0:
            # exceptional shift to break rare cycles
            sigma = t[hi, hi] + 0.75 * abs(t[hi, hi - 1])
        else:
            sigma = _wilkinson(t[hi - 1, hi - 1], t[hi - 1, hi], t[hi, hi - 1], t[hi, hi])
        x = t[lo, lo] - sigma
        y = t[lo + 1, lo]
        for k in range(lo, hi):
            c, s = _givens(x, y)
            cs = np.conj(s)
            c0 = max(lo, k - 1)
            r1 = min(hi, k + 2) + 1
            rk = t[k, c0:].copy()
            rk1 = t[k + 1, c0:]
            t[k, c0:] = c * rk + s * rk1
            t[k + 1, c0:] = -cs * rk + c * rk1
            ck = t[:r1, k].copy()
            ck1 = t[:r1, k + 1]
            t[:r1, k] = c * ck + cs * ck1
            t[:r1, k + 1] = -s * ck + c * ck1
            zk = z[:, k].copy()
            z[:, k] = c * zk + cs * z[:, k + 1]
            z[:, k + 1] = -s * zk + c * z[:, k + 1]
            if k < hi - 1:
                x = t[k + 1, k]
                y = t[k + 2, k]
    for i in range(1, n):
        t[i, :i] = 0.0
    return t, z, True


def jacobi_hermitian(a, max_sweeps):
    """Cyclic Jacobi diagonalization of a Hermitian matrix.

    Rotations below a small absolute floor are skipped; convergence is
    declared once the off-diagonal Frobenius mass drops to roundoff.
    """
    h = np.array(a, dtype=np.complex128, copy=True)
    h = 0.5 * (h + h.conj().T)
    n = h.shape[0]
    v = np.eye(n, dtype=np.complex128)
    fnorm = np.linalg.norm(h)
    if fnorm == 0.0 or n == 1:
        return np.real(np.diag(h)).copy(), v, True
    stop_tol = n * _EPS * fnorm
    ok = False
    for _ in range(max_sweeps):
        off = np.linalg.norm(h - np.diag(np.diag(h)))
        if off <= stop_tol:
            ok = True
            break
        floor = 0.5 * stop_tol / n
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = h[p, q]
                if abs(apq) <= floor:
                    continue
                app = h[p, p].real
                aqq = h[q, q].real
                u = apq / abs(apq)
                tau = (aqq - app) / (2.0 * abs(apq))
                if tau >= 0.0:
                    tt = 1.0 / (tau + np.hypot(1.0, tau))
                else:
                    tt = -1.0 / (-tau + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, tt)
                sr = tt * c
                # rotation: [p,p]=c, [p,q]=sr*u, [q,p]=-sr*conj(u), [q,q]=c
                su = sr * u
                suc = sr * np.conj(u)
                rp = h[p, :].copy()
                h[p, :] = c * rp - su * h[q, :]
                h[q, :] = suc * rp + c * h[q, :]
                cp = h[:, p].copy()
                h[:, p] = c * cp - suc * h[:, q]
                h[:, q] = su * cp + c * h[:, q]
                h[p, q] = 0.0
                h[q, p] = 0.0
                h[p, p] = h[p, p].real
                h[q, q] = h[q, q].real
                vp = v[:, p].copy()
                v[:, p] = c * vp - suc * v[:, q]
                v[:, q] = su * vp + c * v[:, q]
    else:
        off = np.linalg.norm(h - np.diag(np.diag(h)))
        ok = off <= stop_tol
    return np.real(np.diag(h)).copy(), v, ok
