"""Kernel backend selection.

Prefers the compiled extension; falls back to the numpy implementation
when the extension is missing or SUBEIG_PURE_PYTHON is set.
"""

import os

from . import _kernels_py

__all__ = ["BACKEND", "hessenberg", "hessenberg_eig", "jacobi_hermitian", "get_backend"]

_FORCE_PY = os.environ.get("SUBEIG_PURE_PYTHON", "").lower() in ("1", "true", "yes")

if not _FORCE_PY:
    try:
        from . import _accel as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"
else:
    _impl = _kernels_py
    BACKEND = "python"

hessenberg = _impl.hessenberg
hessenberg_eig = _impl.hessenberg_eig
jacobi_hermitian = _impl.jacobi_hermitian


def get_backend(name):
    """Return the kernel module for 'python' or 'cython' (None if absent)."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        try:
            from . import _accel

            return _accel
        except ImportError:
            return None
    raise ValueError("unknown backend %r" % name)
