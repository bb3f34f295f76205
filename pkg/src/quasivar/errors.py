class QuasivarError(Exception):
    """Base class for errors raised by this package."""


class SignatureMismatch(QuasivarError):
    """Operands do not share the signature required by an operation."""


class GuardExceeded(QuasivarError):
    """A configured size guard was exceeded.

    Guards exist because every procedure here is exponential in the worst
    case; exceeding one is an error, never a silent truncation.
    """


class ParseError(QuasivarError):
    def __init__(self, message, line=1, column=0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
