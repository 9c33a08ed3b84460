"""Exception hierarchy.

Validation problems derive from ``ValueError`` so callers that only care
about "bad input" can catch that; numerical failures (frames that are not
frames, iterations that do not contract) derive from ``ArithmeticError``.
"""


class CoorbitError(Exception):
    """Base class for every error raised by this package."""


class GroupMismatch(CoorbitError, ValueError):
    pass


class ShapeMismatch(CoorbitError, ValueError):
    pass


class LengthMismatch(CoorbitError, ValueError):
    pass


class NonPositiveWeight(CoorbitError, ValueError):
    pass


class RadiusTooLarge(CoorbitError, ValueError):
    pass


class InvalidExponent(CoorbitError, ValueError):
    pass


class NotDense(CoorbitError, ValueError):
    pass


class CountTooLarge(CoorbitError, ValueError):
    pass


class InvalidFitWindow(CoorbitError, ValueError):
    pass


class NotAFrame(CoorbitError, ArithmeticError):
    """The Gabor system has (numerically) zero lower frame bound."""

    def __init__(self, A, B, message=None):
        self.A = float(A)
        self.B = float(B)
        super().__init__(message or f"not a frame: A={self.A:.3e}, B={self.B:.3e}")


class NeumannStalled(CoorbitError, ArithmeticError):
    pass


class NotContractive(CoorbitError, ArithmeticError):
    pass


class MaxIterExceeded(CoorbitError, ArithmeticError):
    pass
