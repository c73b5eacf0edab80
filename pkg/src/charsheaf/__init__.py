"""Character sheaves on disconnected groups: exact finite-group computations."""

from .errors import InconsistencyError, ValidationError

__all__ = ["InconsistencyError", "ValidationError"]
__version__ = "0.1.0"
