"""Immutable syntax tree for DepCoL dependency models."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .diagnostics import SourceLocation

ALL_GROUP = "ALL"


class ElementKind(str, enum.Enum):
    PLUGIN = "plugin"
    FEATURE = "feature"
    PLUGIN_GROUP = "plugingroup"
    FEATURE_GROUP = "featuregroup"

    @property
    def is_group(self) -> bool:
        return self in (ElementKind.PLUGIN_GROUP, ElementKind.FEATURE_GROUP)

    @property
    def display(self) -> str:
        return {
            ElementKind.PLUGIN: "plugin",
            ElementKind.FEATURE: "feature",
            ElementKind.PLUGIN_GROUP: "plugin group",
            ElementKind.FEATURE_GROUP: "feature group",
        }[self]


class Severity(str, enum.Enum):
    CRITICAL = "critical"
    ERROR = "error"
    WARNING = "warning"

    @property
    def rank(self) -> int:
        """Higher is more severe."""
        return {"critical": 3, "error": 2, "warning": 1}[self.value]


class StatementKind(str, enum.Enum):
    FORBID = "forbid"
    TOLERATE = "tolerate"
    ALLOW = "allow"


@dataclass(frozen=True)
class NamePattern:
    """A name that may contain ``*`` wildcards."""

    text: str

    @property
    def is_literal(self) -> bool:
        return "*" not in self.text

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class ElementRef:
    kind: ElementKind
    name: str
    location: SourceLocation | None = field(default=None, compare=False)

    def __str__(self) -> str:
        return f"{self.kind.display} {self.name}"

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "name": self.name}


@dataclass(frozen=True)
class BaseDecl:
    """A ``declare featurebase`` or ``declare pluginbase`` block.

    ``entries`` is already deduplicated; repeated names are kept in
    ``duplicates`` so validation can warn about them.
    """

    kind: ElementKind
    entries: tuple[str, ...] = ()
    location: SourceLocation | None = None
    duplicates: tuple[tuple[str, SourceLocation], ...] = ()

    @property
    def declared(self) -> bool:
        return self.location is not None


@dataclass(frozen=True)
class GroupMember:
    """Either a name pattern or a reference to another group."""

    location: SourceLocation
    pattern: NamePattern | None = None
    group: ElementRef | None = None

    def __post_init__(self) -> None:
        if (self.pattern is None) == (self.group is None):
            raise ValueError("a group member is exactly one of pattern or group reference")


@dataclass(frozen=True)
class GroupDecl:
    kind: ElementKind
    name: str
    members: tuple[GroupMember, ...]
    location: SourceLocation


@dataclass(frozen=True)
class ConstraintStatement:
    kind: StatementKind
    severity: Severity | None
    subject: ElementRef
    target: ElementRef
    location: SourceLocation
    ordinal: int

    def describe(self) -> str:
        sev = f"[{self.severity.value}] " if self.severity is not None else ""
        return f"{self.subject} {{ {sev}{self.kind.value} dependency to {self.target}; }}"


@dataclass(frozen=True)
class ConstraintBlock:
    subject: ElementRef
    statements: tuple[ConstraintStatement, ...]
    location: SourceLocation


@dataclass(frozen=True)
class DependencyModel:
    feature_base: BaseDecl = BaseDecl(ElementKind.FEATURE)
    plugin_base: BaseDecl = BaseDecl(ElementKind.PLUGIN)
    groups: tuple[GroupDecl, ...] = ()
    blocks: tuple[ConstraintBlock, ...] = ()
    file: str = "<model>"

    @property
    def statements(self) -> tuple[ConstraintStatement, ...]:
        """All constraint statements in ascending ordinal order."""
        stmts = [s for block in self.blocks for s in block.statements]
        return tuple(sorted(stmts, key=lambda s: s.ordinal))

    def group(self, kind: ElementKind, name: str) -> GroupDecl | None:
        """Return the first declaration of the named group, or None."""
        for decl in self.groups:
            if decl.kind is kind and decl.name == name:
                return decl
        return None
