"""Exception types shared across the package."""

__all__ = [
    "SubeigError",
    "SingularMatrixError",
    "NonConvergenceError",
    "SingularDiagonalError",
    "BreakdownError",
    "LinearlyDependentError",
    "MatrixMarketError",
]


class SubeigError(Exception):
    pass


class SingularMatrixError(SubeigError):
    """Raised by the LU solver when a pivot falls below tolerance."""

    def __init__(self, pivot_index, message=None):
        self.pivot_index = pivot_index
        if message is None:
            message = "matrix is singular to working precision (pivot %d)" % pivot_index
        super().__init__(message)


class NonConvergenceError(SubeigError):
    """Raised when the QR iteration exhausts its sweep budget.

    Carries whatever partial decomposition was available so callers can
    inspect it; its ``converged`` flag is always False.
    """

    def __init__(self, partial, message="eigenvalue iteration did not converge"):
        self.partial = partial
        super().__init__(message)


class SingularDiagonalError(SubeigError):
    """Diagonal shift too close to zero for the entrywise solve."""

    def __init__(self, index, message=None):
        self.index = index
        if message is None:
            message = "diagonal entry %d is too close to the shift" % index
        super().__init__(message)


class BreakdownError(SubeigError):
    """A correction formula hit an undefined scalar (eta or tau)."""


class LinearlyDependentError(SubeigError):
    """Candidate basis vector vanished under orthogonalization."""


class MatrixMarketError(SubeigError):
    """Malformed Matrix Market input; carries the offending line number."""

    def __init__(self, line_no, message):
        self.line_no = line_no
        super().__init__("line %d: %s" % (line_no, message))
