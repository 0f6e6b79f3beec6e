"""Exception hierarchy shared by every module."""
from __future__ import annotations

from dataclasses import dataclass


class UltraError(Exception):
    """Base class for all library errors."""


class EmptyRange(UltraError):
    pass


class UniverseMismatch(UltraError):
    pass


class BudgetExceeded(UltraError):
    pass


class NoUnit(UltraError):
    pass


class HasSinks(UltraError):
    def __init__(self, sinks):
        self.sinks = tuple(sinks)
        super().__init__("ultragraph has sinks: " + ", ".join(self.sinks))


class NotHereditary(UltraError):
    pass


class NotSaturatedHereditary(UltraError):
    pass


class InternalDisagreement(UltraError):
    pass


class NotEventuallyConstant(UltraError):
    pass


class Inconclusive(UltraError):
    """A symbolic computation could not be settled on the configured windows."""


class Unsupported(UltraError):
    pass


@dataclass(frozen=True)
class SourceSpan:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


class InputError(UltraError):
    """Parse-level diagnostic carrying a source position."""

    def __init__(self, message: str, span: SourceSpan | None = None):
        self.message = message
        self.span = span
        prefix = f"line {span.line}, col {span.col}: " if span else ""
        super().__init__(prefix + message)


class ParseError(InputError):
    pass


class UndeclaredVertex(InputError):
    pass


class DuplicateId(InputError):
    pass


class RangeIsEmpty(InputError, EmptyRange):
    """Empty range detected while parsing."""
