"""Exception types shared across the package.

The CLI maps these onto exit codes: input/format problems exit 2,
precondition violations exit 3, numerical non-convergence exit 4.
"""


class QPlaneError(Exception):
    """Base class for all errors raised by this package."""


class InputFormatError(QPlaneError, ValueError):
    """A file or payload does not match one of the documented formats."""


class PreconditionError(QPlaneError, ValueError):
    """An operation was called outside its documented domain."""


class NonConvergenceError(QPlaneError, RuntimeError):
    """An iterative numerical routine exhausted its budget."""
