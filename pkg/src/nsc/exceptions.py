"""Exception hierarchy shared by every module of the package."""


class NSCError(Exception):
    """Base class for errors raised by nsc."""


class InvalidCouplingError(NSCError, ValueError):
    """Coupling outside the admissible range (kappa <= -1, alpha <= 0)."""


class SingularDilationError(NSCError, ZeroDivisionError):
    """Coupled subtraction with 1 + kappa * y == 0."""


class DomainError(NSCError, ValueError):
    """Argument outside the domain of a coupled function."""


class UnsupportedParametersError(NSCError, ValueError):
    """Parameter combination the distribution families do not cover."""


class NormalizationError(NSCError, ValueError):
    """Probability vector does not sum to one."""


class QuadratureError(NSCError, ArithmeticError):
    """Adaptive integration did not reach the requested tolerance."""

    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


class DivergentEscortError(QuadratureError):
    """The escort integral of f**(1+m) does not converge."""


class OutOfTableError(NSCError, ValueError):
    """Coupling outside the piecewise tail-limit table."""
