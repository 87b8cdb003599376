"""Exception types shared across the package."""


class HundqeError(Exception):
    """Base class for all package errors."""


class CapacityError(HundqeError):
    """A size limit was exceeded (too many modes, too large a matrix)."""


class FcidumpParseError(HundqeError):
    """Malformed FCIDUMP input."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DimensionError(HundqeError):
    """Mismatched operand dimensions."""


class ConvergenceError(HundqeError):
    """Iterative solver failed to converge; carries the best estimate."""

    def __init__(self, message, best_value=None):
        super().__init__(message)
        self.best_value = best_value
