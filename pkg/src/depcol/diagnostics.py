"""Source locations and diagnostics shared by every stage of the checker."""

from __future__ import annotations

import enum
from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class SourceLocation:
    """A 1-based position inside a named file."""

    file: str
    line: int = 1
    column: int = 1

    def __post_init__(self) -> None:
        if self.line < 1 or self.column < 1:
            raise ValueError(f"line and column must be >= 1, got {self.line}:{self.column}")

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"

    def to_json(self) -> dict:
        return {"file": self.file, "line": self.line, "column": self.column}


class Level(str, enum.Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    """A single error or warning, identified by a short stable code.

    Codes used across the package:

    ``E-SYNTAX``
        Lexical or grammatical error in a model file.
    ``CC1`` .. ``CC8``
        Context-condition violations found by :func:`depcol.validate_model`.
    ``W-DUPLICATE-BASE-ENTRY``
        A name listed twice in a feature or plugin base.
    ``E-MANIFEST``, ``E-FEATURE-XML``, ``E-READ``, ``E-DUPLICATE-PLUGIN``, ``E-DUPLICATE-FEATURE``
        Workspace extraction failures.
    ``W-FEATURE-INCLUDE``, ``W-EXTERNAL-TARGET``, ``W-SELF-EDGE``
        Workspace extraction warnings.
    ``W-MISSING-FEATURE``, ``W-VACUOUS-CONSTRAINT``, ``W-PLUGIN-NOT-IN-BASE``
        Checker warnings.
    """

    level: Level
    code: str
    message: str
    location: SourceLocation | None = None

    def __post_init__(self) -> None:
        if not self.message:
            raise ValueError("diagnostic message must be nonempty")

    @property
    def is_error(self) -> bool:
        return self.level is Level.ERROR

    def __str__(self) -> str:
        where = f"{self.location}: " if self.location is not None else ""
        return f"{where}{self.level.value} [{self.code}] {self.message}"

    def to_json(self) -> dict:
        return {
            "level": self.level.value,
            "code": self.code,
            "message": self.message,
            "location": self.location.to_json() if self.location is not None else None,
        }


def error(code: str, message: str, location: SourceLocation | None = None) -> Diagnostic:
    return Diagnostic(Level.ERROR, code, message, location)


def warning(code: str, message: str, location: SourceLocation | None = None) -> Diagnostic:
    return Diagnostic(Level.WARNING, code, message, location)


def has_errors(diagnostics) -> bool:
    return any(d.is_error for d in diagnostics)
