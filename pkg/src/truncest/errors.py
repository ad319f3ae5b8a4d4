"""Exception types shared across the package."""


class TruncestError(Exception):
    """Base class for all errors raised by this package."""


class ModelParseError(TruncestError):
    """A model literal or data file could not be parsed."""


class SupportMismatchError(TruncestError):
    """A candidate model has (numerically) zero density at a support point."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class UnsupportedFormError(TruncestError):
    """No one-parameter exponential representation exists for the request."""


class NoRootError(TruncestError):
    """A bracketing search found no sign change inside the given bounds."""


class OptimizationError(TruncestError):
    """The optimizer could not produce a feasible estimate."""
