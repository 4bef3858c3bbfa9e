"""Exception hierarchy shared by every evaluator."""


class MzvError(Exception):
    """Base class for all errors raised by mzvsum."""


class DomainError(MzvError, ValueError):
    """An argument lies outside the region where the quantity is defined."""


class PoleError(DomainError):
    """Evaluation point is too close to a pole."""


class CancellationError(MzvError, ArithmeticError):
    """More digits were lost to cancellation than the guard digits can absorb."""


class ConvergenceError(MzvError, ArithmeticError):
    """A truncated series could not be extrapolated to the requested tolerance."""


class IllConditioned(MzvError, ArithmeticError):
    """A tail fit amplifies rounding noise beyond the usable precision."""


class NonFinite(MzvError, ArithmeticError):
    """An integrand produced inf or nan at an interior quadrature node."""


class DepthUnsupported(MzvError, ValueError):
    """Requested integral dimension is above the supported cap."""


class DivisionByZero(MzvError, ZeroDivisionError):
    """Divisor is numerically zero at the working precision."""
