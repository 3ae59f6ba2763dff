"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Raised when inputs violate a documented precondition or invariant."""


class SolverError(RuntimeError):
    """Raised when the nodal system cannot be solved (singular matrix)."""


class InstabilityError(RuntimeError):
    """Raised when the transient integration produces non-finite values.

    Usually fixed by reducing the time step.
    """


class IllConditionedError(RuntimeError):
    """Raised when a regression system is singular or nearly so.

    Increase the ridge penalty to regularize.
    """
