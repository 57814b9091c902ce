# errors.py: Exception hierarchy shared by every pipeline stage.
# Validated-input problems and numerical failures are kept apart because
# the CLI reports them with different exit codes.


class NstError(Exception):
    """Base class for all pipeline errors."""

    exit_code = 2


class InputError(NstError, ValueError):
    """An argument, file or dataset failed validation."""

    exit_code = 1


class NumericalError(NstError, RuntimeError):
    """A computation could not be completed (non-PSD matrix, divergence, ...)."""

    exit_code = 2
