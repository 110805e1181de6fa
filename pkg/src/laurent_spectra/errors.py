"""Exception types shared across the package."""


class LaurentSpectraError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(LaurentSpectraError):
    """Malformed or inconsistent input file/object."""


class DimensionMismatch(LaurentSpectraError):
    """Block dimensions of two operands disagree."""


class GridTooCoarse(LaurentSpectraError):
    """Sampling grid violates the Nyquist-style bound for the coefficient band."""


class NoConvergence(LaurentSpectraError):
    """The underlying QR eigenvalue iteration did not converge."""


class AmbiguousTracking(LaurentSpectraError):
    """Eigenvalue continuation between adjacent grid points is not resolvable.

    Signals under-resolution: the best and second-best matchings are nearly
    tied although the competing eigenvalues are well separated.  Raising the
    grid size is the intended remedy.
    """


class NontrivialMonodromy(LaurentSpectraError):
    """Eigenvalue labels do not close up after one loop around the circle."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class BandViolation(LaurentSpectraError):
    """A matrix entry lies outside the declared band."""


class RootFindingFailure(LaurentSpectraError):
    """A polynomial root solve produced non-finite values."""

    def __init__(self, message, failed_indices=()):
        super().__init__(message)
        self.failed_indices = tuple(failed_indices)
