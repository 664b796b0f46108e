"""Resolution of model elements to the plugins they denote.

Feature and plugin groups resolve against the names declared in the model's
bases, never against the workspace. Features map to plugins through the
workspace's ``feature.xml`` containment.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from functools import cached_property

from .diagnostics import Diagnostic, warning
from .model import ALL_GROUP, DependencyModel, ElementKind, ElementRef, GroupDecl, NamePattern
from .workspace import Workspace


class ResolutionError(LookupError):
    """Raised for references to groups the model never declares."""


@dataclass(frozen=True)
class CompiledPattern:
    """Anchored matcher: ``*`` matches any run of characters, the rest is literal."""

    source: NamePattern

    @cached_property
    def _regex(self) -> re.Pattern[str]:
        return re.compile(".*".join(re.escape(part) for part in self.source.text.split("*")), re.DOTALL)

    def matches(self, name: str) -> bool:
        if self.source.is_literal:
            return name == self.source.text
        return self._regex.fullmatch(name) is not None


def compile_pattern(pattern: NamePattern | str) -> CompiledPattern:
    if isinstance(pattern, str):
        pattern = NamePattern(pattern)
    return CompiledPattern(pattern)


@dataclass(frozen=True)
class Universe:
    feature_names: frozenset[str]
    plugin_names: frozenset[str]

    @classmethod
    def of(cls, model: DependencyModel) -> "Universe":
        return cls(frozenset(model.feature_base.entries), frozenset(model.plugin_base.entries))


def _index(model: DependencyModel, kind: ElementKind) -> dict[str, GroupDecl]:
    table: dict[str, GroupDecl] = {}
    for decl in model.groups:
        if decl.kind is kind:
            table.setdefault(decl.name, decl)
    return table


class _GroupTable:
    def __init__(self, model: DependencyModel, kind: ElementKind, universe: frozenset[str]) -> None:
        self.kind = kind
        self.universe = universe
        self.decls = _index(model, kind)
        self._cache: dict[str, frozenset[str]] = {}
        self._lock = threading.Lock()

    def resolve(self, name: str) -> frozenset[str]:
        cached = self._cache.get(name)
        if cached is not None:
            return cached
        result = self._resolve(name, ())
        with self._lock:
            self._cache.setdefault(name, result)
        return result

    def _resolve(self, name: str, active: tuple[str, ...]) -> frozenset[str]:
        if self.kind is ElementKind.PLUGIN_GROUP and name == ALL_GROUP and name not in self.decls:
            return self.universe
        decl = self.decls.get(name)
        if decl is None:
            raise ResolutionError(f"undeclared {self.kind.display} {name}")
        if name in active:
            raise ResolutionError(f"cyclic {self.kind.display} inclusion through {name}")
        found: set[str] = set()
        for member in decl.members:
            if member.group is not None:
                if member.group.kind is self.kind:
                    found |= self._cache.get(member.group.name) or self._resolve(member.group.name, active + (name,))
            elif member.pattern.is_literal:
                if member.pattern.text in self.universe:
                    found.add(member.pattern.text)
            else:
                matcher = compile_pattern(member.pattern)
                found.update(n for n in self.universe if matcher.matches(n))
        return frozenset(found)


def resolve_feature_group(name: str, model: DependencyModel) -> frozenset[str]:
    """Features of the feature base contained in feature group ``name``."""
    return _GroupTable(model, ElementKind.FEATURE_GROUP, frozenset(model.feature_base.entries)).resolve(name)


def resolve_plugin_group(name: str, model: DependencyModel) -> frozenset[str]:
    """Plugins of the plugin base contained in plugin group ``name``; ``ALL`` is the whole base."""
    return _GroupTable(model, ElementKind.PLUGIN_GROUP, frozenset(model.plugin_base.entries)).resolve(name)


class Resolver:
    """Memoizing plugin-set resolution for one (model, workspace) pair.

    Caches only ever store values that recomputation would produce, so a
    resolver can be shared between threads.
    """

    def __init__(self, model: DependencyModel, ws: Workspace) -> None:
        self.model = model
        self.ws = ws
        self.universe = Universe.of(model)
        self._features = _GroupTable(model, ElementKind.FEATURE_GROUP, self.universe.feature_names)
        self._plugins = _GroupTable(model, ElementKind.PLUGIN_GROUP, self.universe.plugin_names)
        self._cache: dict[ElementRef, frozenset[str]] = {}
        self._missing: dict[str, Diagnostic] = {}
        self._lock = threading.Lock()

    @property
    def diagnostics(self) -> list[Diagnostic]:
        """``W-MISSING-FEATURE`` warnings found so far, sorted by feature name."""
        with self._lock:
            return [self._missing[k] for k in sorted(self._missing)]

    def feature_group(self, name: str) -> frozenset[str]:
        return self._features.resolve(name)

    def plugin_group(self, name: str) -> frozenset[str]:
        return self._plugins.resolve(name)

    def _feature_plugins(self, name: str) -> frozenset[str]:
        feature = self.ws.features.get(name)
        if feature is None:
            with self._lock:
                self._missing.setdefault(
                    name,
                    warning(
                        "W-MISSING-FEATURE",
                        f"feature {name} is in the feature base but not in the workspace; it contains no plugins",
                        self.model.feature_base.location,
                    ),
                )
            return frozenset()
        return feature.plugins

    def plugins_of(self, ref: ElementRef) -> frozenset[str]:
        """The plugin set an element denotes."""
        key = ElementRef(ref.kind, ref.name)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        if ref.kind is ElementKind.PLUGIN:
            result = frozenset((ref.name,))
        elif ref.kind is ElementKind.PLUGIN_GROUP:
            result = self.plugin_group(ref.name)
        elif ref.kind is ElementKind.FEATURE:
            result = self._feature_plugins(ref.name)
        else:
            result = frozenset().union(*(self._feature_plugins(f) for f in sorted(self.feature_group(ref.name))))
        with self._lock:
            self._cache.setdefault(key, result)
        return result


def plugins_of(ref: ElementRef, model: DependencyModel, ws: Workspace) -> frozenset[str]:
    return Resolver(model, ws).plugins_of(ref)
