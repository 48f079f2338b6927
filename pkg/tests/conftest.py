"""Shared helpers for the test suite."""

from pathlib import Path

import numpy as np
import pytest

from subeig.rng import SplitMix64

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def rand_general(n, seed, m=None):
    """Dense complex matrix with uniform[-1,1) entries."""
    m = n if m is None else m
    rng = SplitMix64(seed)
    re = rng.uniform_symmetric(m * n).reshape(m, n)
    im = rng.uniform_symmetric(m * n).reshape(m, n)
    return (re + 1j * im).astype(np.complex128)


def rand_hermitian(n, seed):
    a = rand_general(n, seed)
    return (a + a.conj().T) / 2.0


def rand_symmetric_real(n, seed):
    rng = SplitMix64(seed)
    a = rng.uniform_symmetric(n * n).reshape(n, n)
    return ((a + a.T) / 2.0).astype(np.complex128)


def rand_unit(n, seed, real=False):
    rng = SplitMix64(seed)
    v = rng.uniform_symmetric(n)
    if not real:
        v = v + 1j * rng.uniform_symmetric(n)
    return v / np.linalg.norm(v)


def sin_angle(u, v):
    """Sine of the angle between two vectors, stable near zero."""
    un = u / np.linalg.norm(u)
    vn = v / np.linalg.norm(v)
    return float(np.linalg.norm(un - vn * np.vdot(vn, un)))


def sin_angle_span(cols, z):
    """Sine of the angle between z and the span of the given columns."""
    q, _ = np.linalg.qr(np.column_stack(cols))
    zn = z / np.linalg.norm(z)
    return float(np.linalg.norm(zn - q @ (q.conj().T @ zn)))
