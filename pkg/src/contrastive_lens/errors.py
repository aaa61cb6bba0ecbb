"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Raised when an input violates a documented precondition."""


class NumericError(RuntimeError):
    """Raised when a numerical routine fails (non-convergence, degeneracy)."""
