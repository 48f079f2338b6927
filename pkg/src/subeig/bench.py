"""Timing harness for the dense eigensolver kernels.

Runs the Hermitian (cyclic Jacobi) and general (Hessenberg QR) paths on
random matrices through both backends and prints a table with the
speedup of the compiled extension over the reference implementation.
Usage: python -m subeig.bench [--sizes 50,100,200] [--repeat 3]
"""

import argparse
import time

import numpy as np

from . import backend
from .rng import SplitMix64


def _rand_general(n, rng):
    a = rng.uniform_symmetric(n * n).reshape(n, n)
    b = rng.uniform_symmetric(n * n).reshape(n, n)
    return (a + 1j * b).astype(np.complex128)


def _rand_hermitian(n, rng):
    a = _rand_general(n, rng)
    return (a + a.conj().T) / 2.0


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _run_jacobi(mod, a):
    w, v, ok = mod.jacobi_hermitian(a.copy(), 30)
    if not ok:
        raise RuntimeError("jacobi did not converge")
    return w, v


def _run_qr(mod, a):
    h, q = mod.hessenberg(a.copy())
    t, z, ok = mod.hessenberg_eig(h, q, 30 * a.shape[0])
    if not ok:
        raise RuntimeError("qr iteration did not converge")
    return t, z


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", default="50,100,200",
                   help="comma-separated matrix sizes (default 50,100,200)")
    p.add_argument("--repeat", type=int, default=3,
                   help="timing repetitions, best-of (default 3)")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]

    py = backend.get_backend("python")
    cy = backend.get_backend("cython")
    if cy is None:
        print("compiled extension not available; timing the reference "
              "implementation only")

    header = "%-10s %-6s %12s %12s %9s" % ("kernel", "n", "python", "compiled", "speedup")
    print(header)
    print("-" * len(header))
    rng = SplitMix64(args.seed)
    for n in sizes:
        herm = _rand_hermitian(n, rng)
        gen = _rand_general(n, rng)
        for label, mat, runner in (("jacobi", herm, _run_jacobi),
                                   ("hess-qr", gen, _run_qr)):
            t_py = _time(lambda: runner(py, mat), args.repeat)
            if cy is None:
                print("%-10s %-6d %12.4f %12s %9s" % (label, n, t_py, "-", "-"))
                continue
            t_cy = _time(lambda: runner(cy, mat), args.repeat)
            wp, _ = runner(py, mat)[:2]
            wc, _ = runner(cy, mat)[:2]
            vp = np.sort_complex(np.atleast_1d(np.diag(wp) if wp.ndim == 2 else wp))
            vc = np.sort_complex(np.atleast_1d(np.diag(wc) if wc.ndim == 2 else wc))
            drift = float(np.max(np.abs(vp - vc))) / max(1.0, float(np.max(np.abs(vp))))
            print("%-10s %-6d %12.4f %12.4f %8.1fx   (backend drift %.1e)"
                  % (label, n, t_py, t_cy, t_py / t_cy, drift))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
