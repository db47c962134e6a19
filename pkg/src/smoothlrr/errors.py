"""Exception and warning types raised by smoothlrr."""

from numpy.linalg import LinAlgError


class EmptyMatrixError(ValueError):
    pass


class NotSquareError(ValueError):
    pass


class NotSymmetricError(ValueError):
    pass


class DimensionMismatchError(ValueError):
    pass


class InvalidExponentError(ValueError):
    pass


class NonPositiveMuError(ValueError):
    pass


class InvalidGroupsError(ValueError):
    pass


class InvalidParamsError(ValueError):
    pass


class LengthMismatchError(ValueError):
    pass


class EigFailedToConvergeError(LinAlgError):
    pass


class SingularShiftError(LinAlgError):
    """Negative power of a singular matrix requested with zero shift."""


class NearSingularPencilError(LinAlgError):
    """A Sylvester equation is singular (or nearly so) to working precision."""


class ConvergenceWarning(UserWarning):
    """Solver hit ``max_iter`` before the stopping rule fired."""


class MatrixFormatError(ValueError):
    """A matrix file is malformed or holds non-finite values."""
