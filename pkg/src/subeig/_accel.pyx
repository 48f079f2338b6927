"""Compiled dense eigensolver kernels.

Same contracts as ``subeig._kernels_py``; see that module for the
reference implementation and documentation.
"""

import numpy as np

cimport cython
from libc.float cimport DBL_EPSILON
from libc.math cimport hypot, sqrt

cdef extern from "complex.h" nogil:
    double cabs(double complex)
    double creal(double complex)
    double cimag(double complex)
    double complex conj(double complex)
    double complex csqrt(double complex)

__all__ = ["hessenberg", "hessenberg_eig", "jacobi_hermitian"]


def hessenberg(a):
    a_arr = np.array(a, dtype=np.complex128, order="C", copy=True)
    q_arr = np.eye(a_arr.shape[0], dtype=np.complex128)
    cdef double complex[:, ::1] h = a_arr
    cdef double complex[:, ::1] q = q_arr
    cdef Py_ssize_t n = h.shape[0]
    cdef Py_ssize_t k, i, j, m
    cdef double normx, vv, beta
    cdef double complex alpha, phase, s
    if n < 3:
        return a_arr, q_arr
    v_arr = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] v = v_arr
    for k in range(n - 2):
        m = n - k - 1
        normx = 0.0
        for i in range(m):
            normx += creal(h[k + 1 + i, k]) ** 2 + cimag(h[k + 1 + i, k]) ** 2
        normx = sqrt(normx)
        if normx == 0.0:
            continue
        alpha = h[k + 1, k]
        if cabs(alpha) != 0.0:
            phase = alpha / cabs(alpha)
        else:
            phase = 1.0
        vv = 0.0
        for i in range(m):
            v[i] = h[k + 1 + i, k]
        v[0] = v[0] + phase * normx
        for i in range(m):
            vv += creal(v[i]) ** 2 + cimag(v[i]) ** 2
        if vv == 0.0:
            continue
        beta = 2.0 / vv
        for j in range(k, n):
            s = 0.0
            for i in range(m):
                s += conj(v[i]) * h[k + 1 + i, j]
            s *= beta
            for i in range(m):
                h[k + 1 + i, j] -= v[i] * s
        for i in range(n):
            s = 0.0
            for j in range(m):
                s += h[i, k + 1 + j] * v[j]
            s *= beta
            for j in range(m):
                h[i, k + 1 + j] -= s * conj(v[j])
        for i in range(n):
            s = 0.0
            for j in range(m):
                s += q[i, k + 1 + j] * v[j]
            s *= beta
            for j in range(m):
                q[i, k + 1 + j] -= s * conj(v[j])
        for i in range(k + 2, n):
            h[i, k] = 0.0
    return a_arr, q_arr


cdef inline double complex _wilkinson(double complex a, double complex b,
                                      double complex c, double complex d) nogil:
    cdef double complex delta = 0.5 * (a - d)
    cdef double complex disc = csqrt(delta * delta + b * c)
    cdef double complex den1 = delta + disc
    cdef double complex den2 = delta - disc
    cdef double complex den
    if cabs(den1) >= cabs(den2):
        den = den1
    else:
        den = den2
    if den == 0.0:
        return d
    return d - b * c / den


def hessenberg_eig(h, q, max_steps):
    t_arr = np.array(h, dtype=np.complex128, order="C", copy=True)
    z_arr = np.array(q, dtype=np.complex128, order="C", copy=True)
    cdef double complex[:, ::1] t = t_arr
    cdef double complex[:, ::1] z = z_arr
    cdef Py_ssize_t n = t.shape[0]
    cdef Py_ssize_t hi, lo, k, i, j, c0, r1
    cdef long total = 0, local = 0, budget = max_steps
    cdef double fnorm = 0.0, s_abs, c, d
    cdef double complex sigma, x, y, s, cs, tk, tk1, ck, ck1, zk, zk1
    cdef bint ok = True
    if n == 0:
        return t_arr, z_arr, True
    for i in range(n):
        for j in range(n):
            fnorm += creal(t[i, j]) ** 2 + cimag(t[i, j]) ** 2
    fnorm = sqrt(fnorm)
    hi = n - 1
    while hi > 0:
        s_abs = cabs(t[hi - 1, hi - 1]) + cabs(t[hi, hi])
        if s_abs == 0.0:
            s_abs = fnorm
        if cabs(t[hi, hi - 1]) <= DBL_EPSILON * s_abs:
            t[hi, hi - 1] = 0.0
            hi -= 1
            local = 0
            continue
        lo = hi
        while lo > 0:
            s_abs = cabs(t[lo - 1, lo - 1]) + cabs(t[lo, lo])
            if s_abs == 0.0:
                s_abs = fnorm
            if cabs(t[lo, lo - 1]) <= DBL_EPSILON * s_abs:
                t[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            local = 0
            continue
        if total >= budget:
            ok = False
            break
        total += 1
        local += 1
        if local % 10 == 0:
            sigma = t[hi, hi] + 0.75 * cabs(t[hi, hi - 1])
        else:
            sigma = _wilkinson(t[hi - 1, hi - 1], t[hi - 1, hi],
                               t[hi, hi - 1], t[hi, hi])
        x = t[lo, lo] - sigma
        y = t[lo + 1, lo]
        for k in range(lo, hi):
            # givens
            if y == 0.0:
                c = 1.0
                s = 0.0
            elif x == 0.0:
                c = 0.0
                s = conj(y) / cabs(y)
            else:
                d = hypot(cabs(x), cabs(y))
                c = cabs(x) / d
                s = (x / cabs(x)) * conj(y) / d
            cs = conj(s)
            c0 = k - 1
            if c0 < lo:
                c0 = lo
            for j in range(c0, n):
                tk = t[k, j]
                tk1 = t[k + 1, j]
                t[k, j] = c * tk + s * tk1
                t[k + 1, j] = -cs * tk + c * tk1
            r1 = k + 2
            if r1 > hi:
                r1 = hi
            for i in range(r1 + 1):
                ck = t[i, k]
                ck1 = t[i, k + 1]
                t[i, k] = c * ck + cs * ck1
                t[i, k + 1] = -s * ck + c * ck1
            for i in range(n):
                zk = z[i, k]
                zk1 = z[i, k + 1]
                z[i, k] = c * zk + cs * zk1
                z[i, k + 1] = -s * zk + c * zk1
            if k < hi - 1:
                x = t[k + 1, k]
                y = t[k + 2, k]
    for i in range(1, n):
        for j in range(i):
            t[i, j] = 0.0
    return t_arr, z_arr, bool(ok)


def jacobi_hermitian(a, max_sweeps):
    h_arr = np.array(a, dtype=np.complex128, copy=True)
    h_arr = 0.5 * (h_arr + h_arr.conj().T)
    h_arr = np.ascontiguousarray(h_arr)
    cdef Py_ssize_t n = h_arr.shape[0]
    v_arr = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] h = h_arr
    cdef double complex[:, ::1] v = v_arr
    cdef Py_ssize_t p, q, i, sweep
    cdef double fnorm = 0.0, off, stop_tol, floor, app, aqq, tau, tt, c, sr
    cdef double complex apq, u, su, suc, hp, vp
    cdef bint ok = False
    cdef long sweeps = max_sweeps
    if n == 1:
        return np.real(np.diag(h_arr)).copy(), v_arr, True
    for p in range(n):
        for q in range(n):
            fnorm += creal(h[p, q]) ** 2 + cimag(h[p, q]) ** 2
    fnorm = sqrt(fnorm)
    if fnorm == 0.0:
        return np.real(np.diag(h_arr)).copy(), v_arr, True
    stop_tol = n * DBL_EPSILON * fnorm
    for sweep in range(sweeps):
        off = 0.0
        for p in range(n):
            for q in range(n):
                if p != q:
                    off += creal(h[p, q]) ** 2 + cimag(h[p, q]) ** 2
        off = sqrt(off)
        if off <= stop_tol:
            ok = True
            break
        floor = 0.5 * stop_tol / n
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = h[p, q]
                if cabs(apq) <= floor:
                    continue
                app = creal(h[p, p])
                aqq = creal(h[q, q])
                u = apq / cabs(apq)
                tau = (aqq - app) / (2.0 * cabs(apq))
                if tau >= 0.0:
                    tt = 1.0 / (tau + hypot(1.0, tau))
                else:
                    tt = -1.0 / (-tau + hypot(1.0, tau))
                c = 1.0 / hypot(1.0, tt)
                sr = tt * c
                su = sr * u
                suc = sr * conj(u)
                for i in range(n):
                    hp = h[p, i]
                    h[p, i] = c * hp - su * h[q, i]
                    h[q, i] = suc * hp + c * h[q, i]
                for i in range(n):
                    hp = h[i, p]
                    h[i, p] = c * hp - suc * h[i, q]
                    h[i, q] = su * hp + c * h[i, q]
                h[p, q] = 0.0
                h[q, p] = 0.0
                h[p, p] = creal(h[p, p])
                h[q, q] = creal(h[q, q])
                for i in range(n):
                    vp = v[i, p]
                    v[i, p] = c * vp - suc * v[i, q]
                    v[i, q] = su * vp + c * v[i, q]
    else:
        off = 0.0
        for p in range(n):
            for q in range(n):
                if p != q:
                    off += creal(h[p, q]) ** 2 + cimag(h[p, q]) ** 2
        ok = sqrt(off) <= stop_tol
    return np.real(np.diag(h_arr)).copy(), v_arr, bool(ok)
