"""Exception hierarchy shared by all modules."""


class LcritError(Exception):
    """Base class; the CLI maps these to exit code 1."""


class DomainError(LcritError, ValueError):
    pass


class CharacterError(LcritError, ValueError):
    """Principal, imprimitive, or otherwise unusable character."""


class PoleError(LcritError, ZeroDivisionError):
    pass


class AccuracyError(LcritError, ArithmeticError):
    """Requested accuracy could not be reached."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ZeroProximityError(LcritError, ArithmeticError):
    def __init__(self, message, distance=None):
        super().__init__(message)
        self.distance = distance


class NumericHealthError(LcritError, ArithmeticError):
    pass


class RangeOverflowError(LcritError, OverflowError):
    """Raised when a value only exists on the log scale; carries it."""

    def __init__(self, message, log_value=None):
        super().__init__(message)
        self.log_value = log_value


class IncompleteZeroListError(LcritError):
    def __init__(self, message, gap=None, counted=None, found=None):
        super().__init__(message)
        self.gap = gap
        self.counted = counted
        self.found = found


class ZeroFileError(LcritError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InsufficientZerosError(LcritError):
    def __init__(self, message, required_height=None):
        super().__init__(message)
        self.required_height = required_height


class MajorantViolation(LcritError):
    def __init__(self, message, worst=None):
        super().__init__(message)
        self.worst = worst
