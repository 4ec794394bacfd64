"""
Error hierarchy for layout analysis.

Validation errors subclass ValueError and map to CLI exit code 1;
capacity guards subclass RuntimeError and map to exit code 2.
"""
from typing import Optional


class RaidLayoutError(Exception):
    """Base class for every error raised by raidlay."""


class UnsupportedSizeError(RaidLayoutError, ValueError):
    """Disk count outside the range an operation supports."""


class DegenerateCellError(RaidLayoutError, ValueError):
    """A cell that repeats a block or collides with another copy on the same disk."""


class IndexOutOfRangeError(RaidLayoutError, ValueError):
    """Block or disk index outside the declared layout dimensions."""


class LayoutSyntaxError(RaidLayoutError, ValueError):
    """Malformed layout document."""

    def __init__(self, message: str, line: int, column: Optional[int] = None):
        self.line = line
        self.column = column
        location = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{location}: {message}")


class NotRecoverableError(RaidLayoutError, ValueError):
    """The requested block is outside the span of the surviving cells."""


class InvalidFailureCountError(RaidLayoutError, ValueError):
    pass


class InvalidKooNError(RaidLayoutError, ValueError):
    pass


class InvalidStructureError(RaidLayoutError, ValueError):
    pass


class InvalidTimeError(RaidLayoutError, ValueError):
    pass


class InvalidTrialsError(RaidLayoutError, ValueError):
    pass


class InvalidProbabilityError(RaidLayoutError, ValueError):
    pass


class ConfigError(RaidLayoutError, ValueError):
    """Invalid run configuration or environment setting."""


class CapacityError(RaidLayoutError, RuntimeError):
    """An exhaustive computation would exceed its configured budget."""


class TooLargeForExactError(CapacityError):
    pass


class UnstoredBlockWarning(UserWarning):
    """A block is never stored as a singleton cell; it can only come back through parity."""
