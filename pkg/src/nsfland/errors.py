"""Exception hierarchy shared across the toolkit.

The CLI maps these onto process exit codes: validation problems exit 1,
verification failures exit 2, I/O problems exit 3.
"""


class ValidationError(ValueError):
    """Raised when an input (landscape, matrix, config) violates a contract."""


class CapacityError(ValidationError):
    """Raised when a request exceeds the supported problem size."""


class NumericalError(RuntimeError):
    """Raised when a numerical routine cannot meet its accuracy contract."""
