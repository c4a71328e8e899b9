"""
Exception hierarchy shared by the engine, the covering search and the CLI.

The CLI maps these onto exit codes (see ``kac_cover.main``).
"""

from __future__ import annotations

from typing import Optional


class KacCoverError(Exception):
    """Base class for every error raised by this package."""


class QuiverInputError(KacCoverError, ValueError):
    """Malformed quiver, dimension vector or violated precondition."""


class QuiverParseError(QuiverInputError):
    """A quiver file could not be parsed."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class DomainError(KacCoverError, ValueError):
    """An operation was evaluated outside its mathematical domain."""


class ResourceLimitError(KacCoverError):
    """A configured search or feasibility limit was exceeded."""


class InternalError(KacCoverError, RuntimeError):
    """An internal invariant failed; this always indicates a bug."""
