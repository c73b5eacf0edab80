"""Exception types shared by all modules."""


class ValidationError(ValueError):
    """Input data is malformed or violates a stated precondition."""


class InconsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree."""
