"""Exception hierarchy shared by all modules."""


class SzegoError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SzegoError, ValueError):
    """Argument outside the region where the quantity is defined."""


class ConvergenceError(SzegoError, RuntimeError):
    """An iterative solver missed its residual target."""

    def __init__(self, message, unconverged=None):
        super().__init__(message)
        self.unconverged = list(unconverged or [])


class ValidationError(SzegoError):
    """A contour failed an admissibility clause."""

    def __init__(self, message, clause=None):
        super().__init__(message)
        self.clause = clause


class ProximityError(DomainError):
    """Evaluation point too close to the integration contour."""


class QuadratureError(SzegoError, RuntimeError):
    """Adaptive quadrature could not reach its error target."""


class JumpLocusError(DomainError):
    """Evaluation on a jump contour without an explicit side."""


class UnsupportedOrder(SzegoError, ValueError):
    """Requested expansion order needs coefficients that are not available."""


class CollisionError(SzegoError, RuntimeError):
    """Two different indices converged to the same zero."""


class AmbiguityError(SzegoError, RuntimeError):
    """Nearest-neighbour matching could not certify a unique assignment."""
