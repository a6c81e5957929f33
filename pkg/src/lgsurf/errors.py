class LgsurfError(Exception):
    """Base class for recoverable computation errors."""


class ChartError(LgsurfError):
    """A chart failed its null-coordinate or non-degeneracy checks."""


class NotHyperbolic(LgsurfError):
    """The surface is not hyperbolic at the requested point."""


class ClassMismatch(LgsurfError):
    """An invariant was requested for a surface of the wrong class."""


class Indeterminate(LgsurfError):
    """A formula is singular at the point; carries the fallback class label."""

    def __init__(self, message, fallback=None):
        super().__init__(message)
        self.fallback = fallback
