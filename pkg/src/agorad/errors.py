"""Shared exception types."""


class AgoradError(Exception):
    """Base class for every package-specific error."""


class ParseError(AgoradError):
    """Malformed input text. Carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class CapacityError(AgoradError):
    """A requested computation exceeds the desk-scale guards."""


class SignatureError(AgoradError):
    """A constraint scope's sorts do not match its relation signature."""


class PartitionUnavailableError(AgoradError):
    """No edge-free vertex partition exists: the graph is strongly connected."""


class VerificationError(AgoradError):
    """A constructed witness failed its mandatory verification.

    This signals an internal bug, never bad user input.
    """
