"""Context conditions over a parsed model.

=====  ==========================================================
CC1    referenced feature name not in the feature base
CC2    referenced plugin name not in the plugin base
CC3    reference to an undeclared group
CC4    kind mismatch inside a group (feature in plugin group etc.)
CC5    cyclic group inclusion
CC6    duplicate group name
CC7    redefinition of the builtin plugin group ``ALL``
CC8    severity annotation on ``tolerate`` or ``allow``
=====  ==========================================================
"""

from __future__ import annotations

from .diagnostics import Diagnostic, error, warning
from .model import (
    ALL_GROUP,
    DependencyModel,
    ElementKind,
    ElementRef,
    GroupDecl,
    StatementKind,
)

_MEMBER_KIND = {ElementKind.FEATURE_GROUP: ElementKind.FEATURE, ElementKind.PLUGIN_GROUP: ElementKind.PLUGIN}


def validate_model(model: DependencyModel) -> list[Diagnostic]:
    """Return every context-condition violation in ``model``.

    The result is ordered by check (base warnings, group declarations,
    group members, cycles, constraint statements) and within each check by
    textual position, so repeated calls return identical lists.
    """
    return _Validator(model).run()


def is_valid(model: DependencyModel) -> bool:
    return not any(d.is_error for d in validate_model(model))


class _Validator:
    def __init__(self, model: DependencyModel) -> None:
        self.model = model
        self.out: list[Diagnostic] = []
        self.features = frozenset(model.feature_base.entries)
        self.plugins = frozenset(model.plugin_base.entries)
        self.declared: dict[ElementKind, dict[str, GroupDecl]] = {
            ElementKind.FEATURE_GROUP: {},
            ElementKind.PLUGIN_GROUP: {},
        }

    def run(self) -> list[Diagnostic]:
        for base in (self.model.feature_base, self.model.plugin_base):
            for name, loc in base.duplicates:
                self.out.append(
                    warning("W-DUPLICATE-BASE-ENTRY", f"{name!r} listed more than once in the {base.kind.value} base", loc)
                )
        for decl in self.model.groups:
            self._declare(decl)
        for decl in self.model.groups:
            self._check_members(decl)
        self._check_cycles()
        for stmt in self.model.statements:
            if stmt.severity is not None and stmt.kind is not StatementKind.FORBID:
                self.out.append(
                    error(
                        "CC8",
                        f"severity [{stmt.severity.value}] is only permitted on 'forbid', not on '{stmt.kind.value}'",
                        stmt.location,
                    )
                )
        for block in self.model.blocks:
            self._check_ref(block.subject)
            for stmt in block.statements:
                self._check_ref(stmt.target)
        return self.out

    def _declare(self, decl: GroupDecl) -> None:
        if decl.kind is ElementKind.PLUGIN_GROUP and decl.name == ALL_GROUP:
            self.out.append(error("CC7", f"the builtin plugin group {ALL_GROUP} cannot be redeclared", decl.location))
            return
        table = self.declared[decl.kind]
        if decl.name in table:
            first = table[decl.name].location
            self.out.append(
                error("CC6", f"{decl.kind.display} {decl.name} already declared at line {first.line}", decl.location)
            )
            return
        table[decl.name] = decl

    def _group_exists(self, kind: ElementKind, name: str) -> bool:
        if kind is ElementKind.PLUGIN_GROUP and name == ALL_GROUP:
            return True
        return name in self.declared[kind]

    def _check_members(self, decl: GroupDecl) -> None:
        own = _MEMBER_KIND[decl.kind]
        other = ElementKind.PLUGIN if own is ElementKind.FEATURE else ElementKind.FEATURE
        own_names = self.features if own is ElementKind.FEATURE else self.plugins
        other_names = self.plugins if own is ElementKind.FEATURE else self.features
        for member in decl.members:
            if member.group is not None:
                ref = member.group
                if ref.kind is not decl.kind:
                    self.out.append(
                        error("CC4", f"{decl.kind.display} {decl.name} cannot contain {ref}", member.location)
                    )
                elif not self._group_exists(ref.kind, ref.name):
                    self.out.append(error("CC3", f"undeclared {ref}", member.location))
                continue
            pattern = member.pattern
            if not pattern.is_literal or pattern.text in own_names:
                continue
            if pattern.text in other_names:
                self.out.append(
                    error(
                        "CC4",
                        f"{other.value} {pattern.text} cannot be a member of {decl.kind.display} {decl.name}",
                        member.location,
                    )
                )
            else:
                self.out.append(self._missing_name(own, pattern.text, member.location))

    def _missing_name(self, kind: ElementKind, name: str, location) -> Diagnostic:
        base = self.model.feature_base if kind is ElementKind.FEATURE else self.model.plugin_base
        code = "CC1" if kind is ElementKind.FEATURE else "CC2"
        if not base.declared:
            return error(code, f"{kind.value} {name} referenced but no {kind.value} base is declared", location)
        return error(code, f"{kind.value} {name} is not listed in the {kind.value} base", location)

    def _check_ref(self, ref: ElementRef) -> None:
        if ref.kind is ElementKind.FEATURE:
            if ref.name not in self.features:
                self.out.append(self._missing_name(ElementKind.FEATURE, ref.name, ref.location))
        elif ref.kind is ElementKind.PLUGIN:
            if ref.name not in self.plugins:
                self.out.append(self._missing_name(ElementKind.PLUGIN, ref.name, ref.location))
        elif not self._group_exists(ref.kind, ref.name):
            self.out.append(error("CC3", f"undeclared {ref}", ref.location))

    def _check_cycles(self) -> None:
        # Iterative DFS in declaration order; each cycle reported once at the
        # declaration where it is first closed.
        for kind, table in self.declared.items():
            state: dict[str, int] = {}
            for root in table:
                if root in state:
                    continue
                stack = [(root, iter(self._children(table[root])))]
                path = [root]
                state[root] = 1
                while stack:
                    name, children = stack[-1]
                    child = next(children, None)
                    if child is None:
                        state[name] = 2
                        stack.pop()
                        path.pop()
                        continue
                    if child not in table:
                        continue
                    if state.get(child) == 1:
                        cycle = path[path.index(child):] + [child]
                        self.out.append(
                            error(
                                "CC5",
                                f"cyclic {kind.display} inclusion: {' -> '.join(cycle)}",
                                table[name].location,
                            )
                        )
                    elif child not in state:
                        state[child] = 1
                        path.append(child)
                        stack.append((child, iter(self._children(table[child]))))

    @staticmethod
    def _children(decl: GroupDecl) -> list[str]:
        return [m.group.name for m in decl.members if m.group is not None and m.group.kind is decl.kind]
