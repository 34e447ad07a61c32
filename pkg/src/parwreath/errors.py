"""Exception types shared across the package."""

from __future__ import annotations


class ParwreathError(Exception):
    """Base class for all errors raised by parwreath."""


class InvalidDegreeError(ParwreathError, ValueError):
    pass


class DegreeMismatchError(ParwreathError, ValueError):
    pass


class NotInvertibleError(ParwreathError, ValueError):
    pass


class NotPartitionPreservingError(ParwreathError, ValueError):
    pass


class UnsupportedCaseError(ParwreathError, ValueError):
    """A trivial partition (or |X| < 3) was given where the rank results do not apply.

    ``identity`` names the classical structure the degenerate case collapses to,
    for instance ``"T(X,P) = T_X"``.
    """

    def __init__(self, message: str, identity: str = ""):
        super().__init__(message)
        self.identity = identity


class BudgetExceededError(ParwreathError, RuntimeError):
    """A search ran out of its closure-call budget before it could conclude.

    ``partial`` carries whatever certificate was accumulated so far.
    """

    def __init__(self, message: str, partial: object = None):
        super().__init__(message)
        self.partial = partial


class ParseError(ParwreathError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
