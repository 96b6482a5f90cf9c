"""Exception hierarchy shared by all gaussrt modules."""


class GaussrtError(Exception):
    """Base class for library errors."""


class ValidationError(GaussrtError, ValueError):
    """Input matrix, partition or document failed validation."""


class SingularPivotError(GaussrtError, ArithmeticError):
    """Schur complement pivot block is (numerically) singular.

    Attributes
    ----------
    smallest_singular_value : float
    condition : float
        2-norm condition number of the pivot block (``inf`` if exactly singular).
    """

    def __init__(self, message, smallest_singular_value, condition):
        super().__init__(message)
        self.smallest_singular_value = smallest_singular_value
        self.condition = condition


class SolverError(GaussrtError, RuntimeError):
    """The SDP solver did not reach an optimal point.

    ``solution`` holds the last :class:`~gaussrt.sdp.SdpSolution` for diagnostics.
    """

    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution
