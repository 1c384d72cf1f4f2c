"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: parameter problems are usage errors
(exit 1), capacity and numeric failures are exit 2, and a failed
verification run is exit 3.
"""


class ParameterError(ValueError):
    """Invalid argument or spec field."""


class CapacityError(RuntimeError):
    """Requested size exceeds the configured dense-materialization cap."""


class NumericError(ArithmeticError):
    """Non-finite values or a numerically failed decomposition."""


class StateError(RuntimeError):
    """Operation illegal in the current stream state (e.g. exhausted)."""


class VerificationError(RuntimeError):
    """One or more oracle identities failed."""
