"""Exception hierarchy shared across the package.

DomainError marks invalid or out-of-scope input (CLI exit code 2).
ClaimViolation marks an internal consistency failure, where the engine
derived something the underlying theory says cannot happen (exit code 1).
"""


class ValjetError(Exception):
    """Base class for errors raised by this package."""


class DomainError(ValjetError):
    """Input is outside the domain of the requested operation."""

    def __init__(self, message, **info):
        super().__init__(message)
        self.info = dict(info)


class ClaimViolation(ValjetError):
    """An internal invariant failed; indicates a bug, not bad input."""


class ParseError(ValjetError):
    """Polynomial text could not be parsed."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position
