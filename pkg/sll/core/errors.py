from typing import Optional


class SllError(Exception):
    """Base class for all errors raised by the toolkit."""


class ArgumentError(SllError, ValueError):
    """An operation was called with arguments outside its domain."""


class DataFormatError(SllError):
    """Malformed dataset or network file."""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        self.row = row
        self.column = column
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column {column!r}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)


class ConfigurationError(SllError):
    """Inconsistent run configuration (benchmark spec, sizes beyond limits)."""


class InternalError(SllError):
    """An internal invariant was violated."""
