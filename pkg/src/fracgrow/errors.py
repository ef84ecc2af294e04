"""Exception hierarchy shared across the package."""


class FracgrowError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(FracgrowError):
    """An argument lies outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """The gamma function was evaluated at zero or a negative integer."""


class NonConvergenceError(FracgrowError):
    """A series hit its term cap before the stopping rule fired."""


class TermOverflowError(FracgrowError):
    """A term-algebra operation exceeded the time-power or coefficient cap."""


class ValidationError(FracgrowError):
    """A value object violates one of its invariants."""


class ParseError(FracgrowError):
    """An input file could not be parsed."""
