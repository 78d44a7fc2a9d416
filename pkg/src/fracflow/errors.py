"""Exception hierarchy shared by all fracflow modules."""

from __future__ import annotations


class FracflowError(Exception):
    """Base class for every error raised by the package."""


class DomainError(FracflowError, ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateError(DomainError):
    """The requested object degenerates (e.g. the Wright density at alpha = 1)."""


class SizeError(DomainError):
    """A combinatorial enumeration would exceed its documented cap."""


class EvaluationOverflowError(FracflowError, OverflowError):
    """The linear-domain result is not representable as a float.

    The natural logarithm of the true value is kept in ``log_value`` so that
    callers can switch to the log-domain API without recomputing.
    """

    def __init__(self, message: str, log_value: float):
        super().__init__(message)
        self.log_value = log_value


class DivergenceError(FracflowError, ArithmeticError):
    """A subordination integral diverges analytically (sigma * (1 - alpha) >= 1)."""


class AccuracyError(FracflowError, ArithmeticError):
    """A numerical budget was exhausted before the tolerance was met."""

    def __init__(self, message: str, estimate: float, error_estimate: float):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate
