"""Exception types shared across the package."""


class TomorouteError(Exception):
    """Base class for all errors raised by tomoroute."""


class InvalidArgumentError(TomorouteError, ValueError):
    """An argument violates an operation's precondition."""


class SizeLimitError(TomorouteError):
    """The instance is too large for the requested exact method."""


class TsplibParseError(TomorouteError, ValueError):
    """Malformed TSPLIB text."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnsupportedFormatError(TsplibParseError):
    """A TSPLIB feature outside the EXPLICIT matrix formats."""


class PrecisionError(TomorouteError, ValueError):
    """Scaled weights are not integral within tolerance."""
