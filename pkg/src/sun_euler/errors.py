"""Exception types raised by the toolkit."""
from __future__ import annotations



class SunEulerError(Exception):
    """Base class for all toolkit errors."""


class DomainError(SunEulerError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ShapeError(SunEulerError, ValueError):
    """Array or list dimensions do not match."""


class CapacityError(SunEulerError, ValueError):
    """The requested size is beyond what the implementation supports."""


class PreconditionError(SunEulerError, ValueError):
    """Input violates a documented precondition (e.g. a point on a range boundary)."""


class ValidationError(SunEulerError, ValueError):
    """An angle vector violates its parameter ranges."""

    def __init__(self, message: str, slot: str | None = None):
        super().__init__(message)
        self.slot = slot


class ParseError(SunEulerError, ValueError):
    """Malformed input file or literal."""


class NumericError(SunEulerError, ArithmeticError):
    """A computation produced a non-finite or otherwise unusable number."""
