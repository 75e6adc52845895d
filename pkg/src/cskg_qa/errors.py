"""Exception types shared across the package."""

from __future__ import annotations


class CskgQaError(Exception):
    """Base class for all package errors."""


class ParseError(CskgQaError):
    """An input file violates its schema.

    Carries enough location information to print ``path:line: reason``.
    """

    def __init__(self, reason: str, path: str | None = None, line: int | None = None):
        self.reason = reason
        self.path = path
        self.line = line
        super().__init__(str(self))

    def __str__(self) -> str:
        prefix = ""
        if self.path is not None:
            prefix = f"{self.path}:"
            if self.line is not None:
                prefix += f"{self.line}:"
            prefix += " "
        elif self.line is not None:
            prefix = f"line {self.line}: "
        return prefix + self.reason


class IoError(CskgQaError):
    """A file could not be read or written."""


class InvalidTriple(CskgQaError):
    """A triple violates its invariants (empty field, subject == object, ...)."""


class GraphFrozen(CskgQaError):
    """Mutation attempted after the graph was frozen."""


class MentionMismatch(CskgQaError):
    """The question span handed to a perturbation does not match the triple subject."""


class EmptyInput(CskgQaError):
    """An operation that requires non-empty text received an empty one."""


class EmptyGolds(CskgQaError):
    """Scoring was asked to compare against an empty gold-answer list."""


class ProtocolError(CskgQaError):
    """An external reader broke the line-delimited JSON protocol."""


class ReaderTimeout(CskgQaError):
    """An external reader did not answer within the configured timeout."""


class ReaderCrashed(CskgQaError):
    """The external reader process exited or could not be started."""
