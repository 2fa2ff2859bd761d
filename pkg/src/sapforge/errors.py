"""Exception types shared across the package."""


class SapforgeError(Exception):
    """Base class for all package errors."""


class DimensionError(SapforgeError, ValueError):
    """Operands have incompatible orders or shapes."""


class ArgumentError(SapforgeError, ValueError):
    """An argument is malformed (bad permutation, wrong point length, ...)."""


class PreconditionError(SapforgeError, ValueError):
    """An operation was called outside its documented precondition."""


class IdentityViolation(SapforgeError, ArithmeticError):
    """A polynomial identity that should hold exactly does not.

    Raised when an exact polynomial division leaves a nonzero remainder.
    """

    def __init__(self, message, remainder=None):
        super().__init__(message)
        self.remainder = remainder


class ParseError(SapforgeError, ValueError):
    """Malformed text input; carries the 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f"line {line}"
            if column is not None:
                loc += f", column {column}"
            loc += ": "
        super().__init__(loc + message)
        self.line = line
        self.column = column
