"""Extraction of actual plugin dependencies from an Eclipse-style workspace.

A plugin ``m`` depends on ``n`` exactly when ``n`` appears in the
``Require-Bundle`` header of ``m``'s ``META-INF/MANIFEST.MF``. Features are
read from ``feature.xml`` and only contribute plugin containment.
"""

from __future__ import annotations

import os
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

from .diagnostics import Diagnostic, SourceLocation, error, warning
from .parser import IDENT_RE


class ExtractionError(Exception):
    """A manifest or feature file could not be turned into a definition."""

    def __init__(self, diagnostic: Diagnostic) -> None:
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


class RequiredBundle(NamedTuple):
    name: str
    optional: bool = False


@dataclass(frozen=True)
class PluginManifest:
    symbolic_name: str
    required_bundles: tuple[RequiredBundle, ...] = ()
    source_path: str = ""


@dataclass(frozen=True)
class FeatureDefinition:
    feature_id: str
    plugins: frozenset[str] = frozenset()
    source_path: str = ""


@dataclass(frozen=True)
class Workspace:
    plugins: Mapping[str, PluginManifest] = field(default_factory=dict)
    features: Mapping[str, FeatureDefinition] = field(default_factory=dict)

    @cached_property
    def features_of_plugin(self) -> dict[str, frozenset[str]]:
        inverse: dict[str, set[str]] = {}
        for fid, feature in self.features.items():
            for plugin in feature.plugins:
                inverse.setdefault(plugin, set()).add(fid)
        return {p: frozenset(fs) for p, fs in sorted(inverse.items())}

    @classmethod
    def from_dicts(
        cls,
        requires: Mapping[str, Iterable[str | RequiredBundle]],
        features: Mapping[str, Iterable[str]] | None = None,
    ) -> "Workspace":
        """Build an in-memory workspace, mostly for tests and demos.

        ``requires`` maps each plugin to its required bundles, either plain
        names or :class:`RequiredBundle` tuples.
        """
        plugins = {}
        for name, reqs in requires.items():
            bundles = tuple(r if isinstance(r, RequiredBundle) else RequiredBundle(r) for r in reqs)
            plugins[name] = PluginManifest(name, bundles, f"/{name}/META-INF/MANIFEST.MF")
        feats = {
            fid: FeatureDefinition(fid, frozenset(members), f"/{fid}/feature.xml")
            for fid, members in (features or {}).items()
        }
        return cls(plugins, feats)


@dataclass(frozen=True)
class DependencyGraph:
    """Plugin to required plugins, in manifest order."""

    edges: Mapping[str, tuple[str, ...]]

    def targets(self, plugin: str) -> tuple[str, ...]:
        return self.edges.get(plugin, ())

    def __contains__(self, plugin: str) -> bool:
        return plugin in self.edges

    def has_edge(self, source: str, target: str) -> bool:
        return target in self.edges.get(source, ())

    def pairs(self) -> list[tuple[str, str]]:
        return [(m, n) for m in sorted(self.edges) for n in self.edges[m]]


# Manifest parsing


def _split_top_level(text: str, sep: str) -> list[str]:
    """Split on ``sep`` outside double-quoted sections."""
    parts, current, quoted = [], [], False
    for ch in text:
        if ch == '"':
            quoted = not quoted
        if ch == sep and not quoted:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return parts


def _read_headers(text: str) -> dict[str, str]:
    headers: dict[str, str] = {}
    last: str | None = None
    for line in text.splitlines():
        if line.startswith(" "):
            if last is not None:
                headers[last] += line[1:]
            continue
        if not line.strip():
            if headers:
                break  # end of the main section
            continue
        name, sep, value = line.partition(":")
        if not sep:
            last = None
            continue
        key = name.strip().lower()
        if key in headers:
            last = None  # first occurrence wins; ignore repeats and their continuations
            continue
        headers[key] = value[1:] if value.startswith(" ") else value
        last = key
    return headers


def _parse_require_bundle(value: str) -> tuple[RequiredBundle, ...]:
    bundles: list[RequiredBundle] = []
    seen: set[str] = set()
    for clause in _split_top_level(value, ","):
        name, *params = _split_top_level(clause, ";")
        name = name.strip()
        if not name or name in seen:
            continue
        optional = False
        for param in params:
            key, sep, val = param.partition(":=")
            if sep and key.strip().lower() == "resolution" and val.strip().strip('"').lower() == "optional":
                optional = True
        seen.add(name)
        bundles.append(RequiredBundle(name, optional))
    return tuple(bundles)


def parse_manifest(data: bytes, path: str | os.PathLike = "<manifest>") -> PluginManifest:
    """Parse the main section of an OSGi ``MANIFEST.MF``.

    Raises:
        ExtractionError: if ``Bundle-SymbolicName`` is missing or empty.
    """
    path = str(path)
    text = data.decode("utf-8", errors="replace").lstrip("﻿")
    headers = _read_headers(text)
    symbolic = _split_top_level(headers.get("bundle-symbolicname", ""), ";")[0].strip()
    if not symbolic:
        raise ExtractionError(error("E-MANIFEST", "missing Bundle-SymbolicName header", SourceLocation(path)))
    required = _parse_require_bundle(headers.get("require-bundle", ""))
    return PluginManifest(symbolic, required, path)


# Feature parsing


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def parse_feature_xml(
    data: bytes, path: str | os.PathLike = "<feature.xml>"
) -> tuple[FeatureDefinition, list[Diagnostic]]:
    """Parse a ``feature.xml`` into its id and contained plugin ids.

    ``<includes>`` elements are ignored; each one yields a
    ``W-FEATURE-INCLUDE`` warning in the returned list.

    Raises:
        ExtractionError: on malformed XML or a missing feature ``id``.
    """
    path = str(path)
    loc = SourceLocation(path)
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line, col = exc.position
        raise ExtractionError(
            error("E-FEATURE-XML", f"malformed XML: {exc}", SourceLocation(path, max(line, 1), col + 1))
        ) from None
    if _local(root.tag) != "feature":
        raise ExtractionError(error("E-FEATURE-XML", f"root element is <{_local(root.tag)}>, expected <feature>", loc))
    fid = (root.get("id") or "").strip()
    if not fid:
        raise ExtractionError(error("E-FEATURE-XML", "feature element has no id attribute", loc))
    plugins: set[str] = set()
    warnings: list[Diagnostic] = []
    for child in root:
        tag = _local(child.tag) if isinstance(child.tag, str) else ""
        if tag == "plugin":
            pid = (child.get("id") or "").strip()
            if pid:
                plugins.add(pid)
            else:
                warnings.append(warning("W-FEATURE-PLUGIN-ID", f"feature {fid}: <plugin> without id ignored", loc))
        elif tag == "includes":
            warnings.append(
                warning(
                    "W-FEATURE-INCLUDE",
                    f"feature {fid}: included feature {child.get('id', '?')!r} ignored; nested features are not flattened",
                    loc,
                )
            )
    return FeatureDefinition(fid, frozenset(plugins), path), warnings


# Scanning


def _candidate_files(root: Path) -> Iterable[tuple[str, Path]]:
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames[:] = sorted(d for d in dirnames if not d.startswith("."))
        here = Path(dirpath)
        for name in filenames:
            if name == "MANIFEST.MF" and here.name == "META-INF":
                yield "manifest", here / name
            elif name == "feature.xml":
                yield "feature", here / name


def scan_workspace(roots: Iterable[str | os.PathLike]) -> tuple[Workspace, list[Diagnostic]]:
    """Collect every manifest and feature below ``roots``.

    Files are processed in sorted path order, so the result does not depend
    on how the file system enumerates directories. When two files declare the
    same plugin (or feature) id, the first in that order wins and the other
    is reported as an error.
    """
    diagnostics: list[Diagnostic] = []
    candidates: list[tuple[str, Path]] = []
    for root in roots:
        root = Path(root)
        if not root.is_dir():
            diagnostics.append(error("E-READ", f"workspace root {root} is not a readable directory", SourceLocation(str(root))))
            continue
        candidates.extend(_candidate_files(root))
    candidates.sort(key=lambda c: str(c[1]))

    plugins: dict[str, PluginManifest] = {}
    features: dict[str, FeatureDefinition] = {}
    for kind, path in candidates:
        try:
            data = path.read_bytes()
        except OSError as exc:
            diagnostics.append(error("E-READ", f"cannot read {path}: {exc.strerror or exc}", SourceLocation(str(path))))
            continue
        try:
            if kind == "manifest":
                manifest = parse_manifest(data, path)
                prior = plugins.get(manifest.symbolic_name)
                if prior is not None:
                    diagnostics.append(
                        error(
                            "E-DUPLICATE-PLUGIN",
                            f"plugin {manifest.symbolic_name} declared by both {prior.source_path} and {path}; "
                            f"keeping the first",
                            SourceLocation(str(path)),
                        )
                    )
                    continue
                plugins[manifest.symbolic_name] = manifest
            else:
                feature, warnings = parse_feature_xml(data, path)
                diagnostics.extend(warnings)
                prior_f = features.get(feature.feature_id)
                if prior_f is not None:
                    diagnostics.append(
                        error(
                            "E-DUPLICATE-FEATURE",
                            f"feature {feature.feature_id} declared by both {prior_f.source_path} and {path}; "
                            f"keeping the first",
                            SourceLocation(str(path)),
                        )
                    )
                    continue
                features[feature.feature_id] = feature
        except ExtractionError as exc:
            diagnostics.append(exc.diagnostic)
    workspace = Workspace(dict(sorted(plugins.items())), dict(sorted(features.items())))
    return workspace, diagnostics


def build_dependency_graph(
    ws: Workspace,
    include_optional: bool = True,
    plugin_base: Iterable[str] | None = None,
) -> tuple[DependencyGraph, list[Diagnostic]]:
    """Derive the plugin dependency graph from required bundles.

    Targets outside the workspace stay in the graph. They are reported as
    ``W-EXTERNAL-TARGET`` only when also absent from ``plugin_base``.
    """
    base = frozenset(plugin_base or ())
    edges: dict[str, tuple[str, ...]] = {}
    diagnostics: list[Diagnostic] = []
    external: dict[str, list[str]] = {}
    for name, manifest in ws.plugins.items():
        targets = tuple(dict.fromkeys(b.name for b in manifest.required_bundles if include_optional or not b.optional))
        edges[name] = targets
        for target in targets:
            if target == name:
                diagnostics.append(
                    warning("W-SELF-EDGE", f"plugin {name} requires itself", SourceLocation(manifest.source_path))
                )
            elif target not in ws.plugins and target not in base:
                external.setdefault(target, []).append(name)
    for target, sources in sorted(external.items()):
        diagnostics.append(
            warning(
                "W-EXTERNAL-TARGET",
                f"{target} is required by {', '.join(sources)} but is neither a workspace plugin nor in the plugin base",
            )
        )
    return DependencyGraph(edges), diagnostics


def generate_bases(ws: Workspace) -> str:
    """Render feature and plugin bases listing every workspace name, sorted."""
    chunks = []
    for keyword, names in (("featurebase", ws.features), ("pluginbase", ws.plugins)):
        lines = [f"declare {keyword} {{"]
        for name in sorted(names):
            if IDENT_RE.fullmatch(name):
                lines.append(f"    {name};")
            else:
                lines.append(f"    // skipped, not a valid identifier: {name}")
        lines.append("}")
        chunks.append("\n".join(lines))
    return "\n".join(chunks) + "\n"
