"""Matrix Market ingestion and synthetic desk-scale models.

Files are expanded to dense complex matrices (order capped at 2000).
Only the matrix object with real/complex fields is supported; pattern
and integer fields are rejected rather than coerced.  Duplicate
coordinate entries are rejected: the files this targets have none, so a
duplicate means the file is corrupt.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import DENSE_CAP, as_matrix
from .errors import MatrixMarketError
from .rng import SplitMix64

__all__ = [
    "MtxHeader",
    "ModelSpec",
    "parse_matrix_market",
    "write_matrix_market",
    "symmetrize",
    "gen_model",
]

_FORMATS = ("coordinate", "array")
_FIELDS = ("real", "complex", "integer", "pattern")
_SYMMETRIES = ("general", "symmetric", "skew-symmetric", "hermitian")


@dataclass(frozen=True)
class MtxHeader:
    object: str
    format: str
    field: str
    symmetry: str


@dataclass(frozen=True)
class ModelSpec:
    name: str
    n: int
    params: tuple = ()


def _read_text(source):
    if hasattr(source, "read"):
        data = source.read()
    elif isinstance(source, bytes):
        data = source
    elif isinstance(source, str) and source.lstrip().startswith("%%"):
        data = source
    else:
        data = Path(source).read_bytes()
    if isinstance(data, bytes):
        data = data.decode("ascii", errors="replace")
    return data


def _parse_banner(line):
    parts = line.strip().split()
    if len(parts) != 5 or parts[0] != "%%MatrixMarket":
        raise MatrixMarketError(1, "malformed banner %r" % line.strip())
    _, obj, fmt, field, sym = (p.lower() for p in parts)
    if obj != "matrix":
        raise MatrixMarketError(1, "unsupported object %r" % obj)
    if fmt not in _FORMATS:
        raise MatrixMarketError(1, "unknown format %r" % fmt)
    if field not in _FIELDS:
        raise MatrixMarketError(1, "unknown field %r" % field)
    if sym not in _SYMMETRIES:
        raise MatrixMarketError(1, "unknown symmetry %r" % sym)
    if field in ("pattern", "integer"):
        raise MatrixMarketError(1, "field %r is not supported" % field)
    return MtxHeader("matrix", fmt, field, sym)


def _parse_value(tokens, field, line_no):
    want = 2 if field == "complex" else 1
    if len(tokens) != want:
        raise MatrixMarketError(line_no, "expected %d numeric value(s), got %d" % (want, len(tokens)))
    try:
        if field == "complex":
            return complex(float(tokens[0]), float(tokens[1]))
        return complex(float(tokens[0]))
    except ValueError:
        raise MatrixMarketError(line_no, "bad numeric value in %r" % " ".join(tokens)) from None


def _mirror(a, i, j, val, symmetry, line_no):
    a[i, j] = val
    if i == j:
        if symmetry == "hermitian" and val.imag != 0.0:
            raise MatrixMarketError(line_no, "hermitian diagonal entry must be real")
        return
    if symmetry == "symmetric":
        a[j, i] = val
    elif symmetry == "hermitian":
        a[j, i] = np.conj(val)
    elif symmetry == "skew-symmetric":
        a[j, i] = -val


def parse_matrix_market(source):
    """Parse MTX content into (dense matrix, header).

    source may be a path, an open file, or the raw text itself.  Errors
    carry the 1-based line number of the offending line.
    """
    text = _read_text(source)
    lines = text.splitlines()
    if not lines:
        raise MatrixMarketError(1, "empty input")
    header = _parse_banner(lines[0])
    pos = 1
    nlines = len(lines)
    while pos < nlines and (lines[pos].startswith("%") or not lines[pos].strip()):
        pos += 1
    if pos >= nlines:
        raise MatrixMarketError(nlines, "missing size line")
    size_line_no = pos + 1
    tokens = lines[pos].split()
    pos += 1
    want_sizes = 3 if header.format == "coordinate" else 2
    if len(tokens) != want_sizes:
        raise MatrixMarketError(size_line_no, "size line needs %d integers" % want_sizes)
    try:
        sizes = [int(t) for t in tokens]
    except ValueError:
        raise MatrixMarketError(size_line_no, "bad size line %r" % lines[pos - 1]) from None
    m, n = sizes[0], sizes[1]
    if m <= 0 or n <= 0:
        raise MatrixMarketError(size_line_no, "dimensions must be positive")
    if max(m, n) > DENSE_CAP:
        raise MatrixMarketError(size_line_no, "order %d exceeds the dense cap %d" % (max(m, n), DENSE_CAP))
    if header.symmetry != "general" and m != n:
        raise MatrixMarketError(size_line_no, "%s matrices must be square" % header.symmetry)
    a = np.zeros((m, n), dtype=np.complex128)

    if header.format == "coordinate":
        nnz = sizes[2]
        seen = set()
        count = 0
        while pos < nlines:
            raw = lines[pos]
            pos += 1
            line_no = pos
            if raw.startswith("%") or not raw.strip():
                continue
            if count >= nnz:
                raise MatrixMarketError(line_no, "more entries than the declared %d" % nnz)
            tokens = raw.split()
            if len(tokens) < 2:
                raise MatrixMarketError(line_no, "entry needs indices and value(s)")
            try:
                i, j = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise MatrixMarketError(line_no, "bad index in %r" % raw) from None
            if not (1 <= i <= m and 1 <= j <= n):
                raise MatrixMarketError(line_no, "index (%d, %d) out of range for %dx%d" % (i, j, m, n))
            if (i, j) in seen:
                raise MatrixMarketError(line_no, "duplicate entry (%d, %d)" % (i, j))
            seen.add((i, j))
            if header.symmetry in ("symmetric", "hermitian") and i < j:
                raise MatrixMarketError(line_no, "%s storage requires row >= column" % header.symmetry)
            if header.symmetry == "skew-symmetric" and i <= j:
                raise MatrixMarketError(line_no, "skew-symmetric storage is strictly below the diagonal")
            val = _parse_value(tokens[2:], header.field, line_no)
            _mirror(a, i - 1, j - 1, val, header.symmetry, line_no)
            count += 1
        if count < nnz:
            raise MatrixMarketError(nlines, "truncated body: %d of %d entries" % (count, nnz))
        return a, header

    # array format: column-major dense body
    if header.symmetry == "general":
        coords = [(i, j) for j in range(n) for i in range(m)]
    elif header.symmetry == "skew-symmetric":
        coords = [(i, j) for j in range(n) for i in range(j + 1, m)]
    else:
        coords = [(i, j) for j in range(n) for i in range(j, m)]
    idx = 0
    while pos < nlines:
        raw = lines[pos]
        pos += 1
        line_no = pos
        if raw.startswith("%") or not raw.strip():
            continue
        if idx >= len(coords):
            raise MatrixMarketError(line_no, "more entries than the %d expected" % len(coords))
        val = _parse_value(raw.split(), header.field, line_no)
        i, j = coords[idx]
        _mirror(a, i, j, val, header.symmetry, line_no)
        idx += 1
    if idx < len(coords):
        raise MatrixMarketError(nlines, "truncated body: %d of %d entries" % (idx, len(coords)))
    return a, header


def write_matrix_market(a, path):
    """Serialize a dense matrix as coordinate complex general.

    Round-trip helper for tests; entries print with 17 significant
    digits so parsing recovers them exactly.
    """
    a = as_matrix(a)
    m, n = a.shape
    rows, cols = np.nonzero(a)
    lines = ["%%MatrixMarket matrix coordinate complex general"]
    lines.append("%d %d %d" % (m, n, len(rows)))
    for i, j in zip(rows, cols):
        v = a[i, j]
        lines.append("%d %d %.17g %.17g" % (i + 1, j + 1, v.real, v.imag))
    Path(path).write_text("\n".join(lines) + "\n")


def symmetrize(a):
    """Hermitian part (A + A*)/2; exact fixed point for Hermitian input."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError("symmetrize needs a square matrix, got %s" % (a.shape,))
    return (a + a.conj().T) / 2.0


def _tridiag(n, sub, diag, sup):
    a = np.zeros((n, n), dtype=np.complex128)
    np.fill_diagonal(a, diag)
    for i in range(n - 1):
        a[i + 1, i] = sub
        a[i, i + 1] = sup
    return a


def _grid_side(n, name):
    side = int(round(np.sqrt(n)))
    if side * side != n:
        raise ValueError("%s needs a perfect square size, got %d" % (name, n))
    return side


def gen_model(spec, seed=0):
    """Generate one of the synthetic models as a dense matrix.

    laplace1d   tridiag(-1, 2, -1)
    laplace2d   5-point stencil Kronecker sum on a sqrt(n) grid
    convdiff2d  laplace2d plus params[0] times an upwind first
                difference in the x direction (nonsymmetric)
    random      i.i.d. uniform[-1, 1) entries, row-major fill from the
                seeded splitmix stream
    tridiag     tridiag(params[0], params[1], params[2])
    """
    if not (2 <= spec.n <= DENSE_CAP):
        raise ValueError("model size %d outside [2, %d]" % (spec.n, DENSE_CAP))
    n = spec.n
    if spec.name == "laplace1d":
        return _tridiag(n, -1.0, 2.0, -1.0)
    if spec.name == "laplace2d":
        side = _grid_side(n, "laplace2d")
        t = _tridiag(side, -1.0, 2.0, -1.0)
        eye = np.eye(side, dtype=np.complex128)
        return np.kron(eye, t) + np.kron(t, eye)
    if spec.name == "convdiff2d":
        side = _grid_side(n, "convdiff2d")
        gamma = spec.params[0] if spec.params else 1.0
        t = _tridiag(side, -1.0, 2.0, -1.0)
        b = _tridiag(side, -1.0, 1.0, 0.0)
        eye = np.eye(side, dtype=np.complex128)
        return np.kron(eye, t) + np.kron(t, eye) + gamma * np.kron(eye, b)
    if spec.name == "random":
        rng = SplitMix64(seed)
        a = np.empty((n, n), dtype=np.complex128)
        for i in range(n):
            a[i, :] = rng.uniform_symmetric(n)
        return a
    if spec.name == "tridiag":
        if len(spec.params) != 3:
            raise ValueError("tridiag needs params (sub, diag, super)")
        return _tridiag(n, spec.params[0], spec.params[1], spec.params[2])
    raise ValueError("unknown model %r" % spec.name)
