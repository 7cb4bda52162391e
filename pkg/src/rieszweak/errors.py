"""Exception hierarchy shared by all modules."""


class RieszWeakError(Exception):
    """Base class for errors raised by this package."""


class DomainError(RieszWeakError, ValueError):
    """An argument lies outside the validity window of an operation."""


class NumericAccuracyError(RieszWeakError, ArithmeticError):
    """A quadrature or search did not reach its tolerance within budget.

    The best available estimate and its error bound are kept so callers
    can decide whether the result is still usable.
    """

    def __init__(self, message, estimate=None, error_bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class InfeasibleWitnessError(RieszWeakError, ValueError):
    """No radius carries the requested fraction of the mass."""


class DivergentNormError(RieszWeakError, ArithmeticError):
    """A supremum grows without bound along the scan."""


class ExtrapolationError(RieszWeakError, ArithmeticError):
    """A limit extrapolation failed to settle."""


class InvariantViolation(RieszWeakError, AssertionError):
    """A mathematical inequality that must hold was violated numerically."""
