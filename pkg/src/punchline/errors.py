"""Exception hierarchy shared by every layer of the engine."""

from __future__ import annotations


class ReasoningError(Exception):
    """Base class for all errors raised by punchline."""


class FormulaSyntaxError(ReasoningError, ValueError):
    """Malformed formula text.

    ``position`` is a 0-based character offset into ``text``; ``expected``
    lists the token kinds that would have been accepted there.
    """

    def __init__(self, message: str, text: str, position: int, expected: tuple[str, ...] = ()):
        self.text = text
        self.position = position
        self.expected = tuple(expected)
        detail = f"{message} at position {position}"
        if self.expected:
            detail += f" (expected {', '.join(self.expected)})"
        super().__init__(detail)


class UnknownAtom(ReasoningError, KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(name)

    def __str__(self) -> str:
        return f"unknown atom {self.name!r}"


class UniverseTooLarge(ReasoningError):
    pass


class InconsistentStrict(ReasoningError):
    """The strict part P of a knowledge base has no model."""


class InconsistentDefaults(ReasoningError):
    """System Z stratification got stuck: some defaults tolerate nothing."""

    def __init__(self, message: str, remaining: tuple[int, ...] = ()):
        self.remaining = tuple(remaining)
        super().__init__(message)


class EmptyRevision(ReasoningError):
    """Revision input is inconsistent with the integrity constraints."""


class EquivalentPunchlines(ReasoningError):
    pass


class UndefinedLevel(ReasoningError):
    """A gradual level was requested for a punchline of possibility 0."""


class KbSyntaxError(ReasoningError, ValueError):
    """Malformed knowledge-base file; carries 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class EmptyUniverse(ReasoningError):
    """An atom universe needs at least one atom."""
