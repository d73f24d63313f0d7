"""Exception types shared across the package."""


class FramepickError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(FramepickError, ValueError):
    """Raised when inputs violate a documented precondition or invariant."""


class BoundViolationError(FramepickError, RuntimeError):
    """Raised when an exhaustive run exceeds its certified error bound.

    This should never happen: it signals either a solver bug or a falsified
    bound constant, and maps to exit code 4 in the CLI.
    """
