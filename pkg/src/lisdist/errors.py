"""Exception types shared across the package."""


class LisdistError(Exception):
    """Base class for package errors."""


class DomainError(LisdistError, ValueError):
    """Input outside the mathematical/supported domain of an operation."""


class CapacityError(LisdistError):
    """Request exceeds a configured exact-computation capacity limit."""


class ConditioningError(LisdistError):
    """A matrix factorization failed or is numerically untrustworthy.

    Carries the condition estimate that triggered the failure.
    """

    def __init__(self, message, condition_estimate=None):
        super().__init__(message)
        self.condition_estimate = condition_estimate


class AccuracyError(LisdistError):
    """A solver or quadrature could not meet its accuracy target."""


class TruncationError(LisdistError):
    """A truncated sum's reported remainder exceeds the requested budget."""


class SolverError(LisdistError):
    """Iterative solver failed to converge; carries the iteration trace."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace or []


class UsageError(LisdistError, ValueError):
    """Operation invoked with inconsistent arguments."""
