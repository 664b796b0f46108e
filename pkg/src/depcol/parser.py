"""Lexer and recursive-descent parser for ``.depcol`` model files.

Keywords are case-insensitive and normalized to lowercase; they are reserved
only in the positions where the grammar expects them, so a plugin may well be
called ``feature`` or ``to``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .diagnostics import Diagnostic, SourceLocation, error
from .model import (
    BaseDecl,
    ConstraintBlock,
    ConstraintStatement,
    DependencyModel,
    ElementKind,
    ElementRef,
    GroupDecl,
    GroupMember,
    NamePattern,
    Severity,
    StatementKind,
)

IDENT_RE = re.compile(r"[A-Za-z0-9_][A-Za-z0-9._-]*")
PATTERN_RE = re.compile(r"[A-Za-z0-9_*][A-Za-z0-9._*-]*")

_WORD_CHARS = frozenset("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789._-*")

_REF_KINDS = {k.value: k for k in ElementKind}
_GROUP_KINDS = {"featuregroup": ElementKind.FEATURE_GROUP, "plugingroup": ElementKind.PLUGIN_GROUP}
_BASE_KINDS = {"featurebase": ElementKind.FEATURE, "pluginbase": ElementKind.PLUGIN}
_STATEMENT_KINDS = {k.value: k for k in StatementKind}
_SEVERITIES = {s.value: s for s in Severity}


class DepcolSyntaxError(Exception):
    """Raised by :func:`parse_model` when the text is not a valid model.

    ``diagnostics`` holds every error found; the parser recovers after each
    one, so a single run reports as many problems as it can.
    """

    def __init__(self, diagnostics: list[Diagnostic]) -> None:
        self.diagnostics = diagnostics
        first = diagnostics[0] if diagnostics else "syntax error"
        more = f" (+{len(diagnostics) - 1} more)" if len(diagnostics) > 1 else ""
        super().__init__(f"{first}{more}")


class TokenType(enum.Enum):
    WORD = "word"
    LBRACE = "{"
    RBRACE = "}"
    SEMI = ";"
    LBRACKET = "["
    RBRACKET = "]"
    EOF = "end of file"


@dataclass(frozen=True)
class Token:
    type: TokenType
    text: str
    line: int
    column: int

    @property
    def lower(self) -> str:
        return self.text.lower()

    def describe(self) -> str:
        if self.type is TokenType.WORD:
            return repr(self.text)
        if self.type is TokenType.EOF:
            return "end of file"
        return f"'{self.text}'"


_PUNCT = {
    "{": TokenType.LBRACE,
    "}": TokenType.RBRACE,
    ";": TokenType.SEMI,
    "[": TokenType.LBRACKET,
    "]": TokenType.RBRACKET,
}


def tokenize(text: str, file_name: str = "<model>") -> tuple[list[Token], list[Diagnostic]]:
    """Split model text into tokens; unknown characters become diagnostics."""
    tokens: list[Token] = []
    diagnostics: list[Diagnostic] = []
    line, col, i, n = 1, 1, 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
        elif ch in " \t\r\f﻿":
            col, i = col + 1, i + 1
        elif text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
        elif ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, line, col))
            col, i = col + 1, i + 1
        elif ch in _WORD_CHARS:
            start = i
            while i < n and text[i] in _WORD_CHARS:
                i += 1
            tokens.append(Token(TokenType.WORD, text[start:i], line, col))
            col += i - start
        else:
            diagnostics.append(
                error("E-SYNTAX", f"unexpected character {ch!r}", SourceLocation(file_name, line, col))
            )
            col, i = col + 1, i + 1
    tokens.append(Token(TokenType.EOF, "", line, col))
    return tokens, diagnostics


class _Recover(Exception):
    """Internal signal: an error was recorded, resynchronize."""


class _Parser:
    def __init__(self, tokens: list[Token], file_name: str, diagnostics: list[Diagnostic]) -> None:
        self._tokens = tokens
        self._pos = 0
        self._file = file_name
        self._diagnostics = diagnostics
        self._ordinal = 0
        self._feature_base: BaseDecl | None = None
        self._plugin_base: BaseDecl | None = None
        self._groups: list[GroupDecl] = []
        self._blocks: list[ConstraintBlock] = []

    # token helpers

    def _peek(self, offset: int = 0) -> Token:
        return self._tokens[min(self._pos + offset, len(self._tokens) - 1)]

    def _advance(self) -> Token:
        tok = self._tokens[self._pos]
        if tok.type is not TokenType.EOF:
            self._pos += 1
        return tok

    def _loc(self, tok: Token) -> SourceLocation:
        return SourceLocation(self._file, tok.line, tok.column)

    def _fail(self, tok: Token, message: str) -> _Recover:
        self._diagnostics.append(error("E-SYNTAX", message, self._loc(tok)))
        return _Recover()

    def _expect(self, ttype: TokenType, what: str) -> Token:
        tok = self._peek()
        if tok.type is not ttype:
            raise self._fail(tok, f"expected {what}, found {tok.describe()}")
        return self._advance()

    def _expect_keyword(self, *words: str) -> Token:
        tok = self._peek()
        if tok.type is not TokenType.WORD or tok.lower not in words:
            expected = " or ".join(f"'{w}'" for w in words)
            raise self._fail(tok, f"expected {expected}, found {tok.describe()}")
        return self._advance()

    def _expect_ident(self) -> Token:
        tok = self._expect(TokenType.WORD, "an identifier")
        if not IDENT_RE.fullmatch(tok.text):
            raise self._fail(tok, f"invalid identifier {tok.text!r}")
        return tok

    # recovery

    def _skip_statement(self) -> None:
        """Skip to just past the next ';', or up to (not past) a '}'."""
        while True:
            tok = self._peek()
            if tok.type is TokenType.EOF or tok.type is TokenType.RBRACE:
                return
            self._advance()
            if tok.type is TokenType.SEMI:
                return

    def _skip_item(self, start_pos: int) -> None:
        """Skip a malformed top-level item including any braced body."""
        if self._pos == start_pos:
            self._advance()
        depth = 0
        while True:
            tok = self._peek()
            if tok.type is TokenType.EOF:
                return
            if depth == 0 and tok.type is TokenType.WORD and tok.lower == "declare":
                return
            self._advance()
            if tok.type is TokenType.LBRACE:
                depth += 1
            elif tok.type is TokenType.RBRACE:
                depth -= 1
                if depth <= 0:
                    return

    # grammar

    def parse(self) -> DependencyModel:
        while self._peek().type is not TokenType.EOF:
            start_pos = self._pos
            try:
                self._item()
            except _Recover:
                self._skip_item(start_pos)
        return DependencyModel(
            feature_base=self._feature_base or BaseDecl(ElementKind.FEATURE),
            plugin_base=self._plugin_base or BaseDecl(ElementKind.PLUGIN),
            groups=tuple(self._groups),
            blocks=tuple(self._blocks),
            file=self._file,
        )

    def _item(self) -> None:
        tok = self._peek()
        if tok.type is TokenType.RBRACE:
            self._advance()
            self._fail(tok, "unbalanced '}'")
            return
        if tok.type is not TokenType.WORD:
            raise self._fail(tok, f"expected a declaration or constraint block, found {tok.describe()}")
        if tok.lower == "declare":
            self._advance()
            kind_tok = self._expect_keyword("featurebase", "pluginbase", "featuregroup", "plugingroup")
            if kind_tok.lower in _BASE_KINDS:
                self._base(tok, _BASE_KINDS[kind_tok.lower])
            else:
                self._group(tok, _GROUP_KINDS[kind_tok.lower])
        elif tok.lower in _REF_KINDS:
            self._block()
        else:
            raise self._fail(tok, f"unknown keyword {tok.text!r}")

    def _close_brace(self, open_tok: Token) -> Token:
        tok = self._peek()
        if tok.type is TokenType.EOF:
            self._fail(tok, f"missing '}}' for block opened at line {open_tok.line}")
            return tok
        return self._advance()

    def _base(self, start: Token, kind: ElementKind) -> None:
        open_tok = self._expect(TokenType.LBRACE, "'{'")
        entries: list[str] = []
        seen: set[str] = set()
        duplicates: list[tuple[str, SourceLocation]] = []
        while self._peek().type not in (TokenType.RBRACE, TokenType.EOF):
            try:
                tok = self._expect_ident()
                self._expect(TokenType.SEMI, "';'")
            except _Recover:
                self._skip_statement()
                continue
            if tok.text in seen:
                duplicates.append((tok.text, self._loc(tok)))
            else:
                seen.add(tok.text)
                entries.append(tok.text)
        self._close_brace(open_tok)
        decl = BaseDecl(kind, tuple(entries), self._loc(start), tuple(duplicates))
        existing = self._feature_base if kind is ElementKind.FEATURE else self._plugin_base
        if existing is not None:
            self._fail(start, f"{kind.value} base declared more than once (first at line {existing.location.line})")
            return
        if kind is ElementKind.FEATURE:
            self._feature_base = decl
        else:
            self._plugin_base = decl

    def _group(self, start: Token, kind: ElementKind) -> None:
        name = self._expect_ident()
        open_tok = self._expect(TokenType.LBRACE, "'{'")
        members: list[GroupMember] = []
        while self._peek().type not in (TokenType.RBRACE, TokenType.EOF):
            try:
                members.append(self._member())
                self._expect(TokenType.SEMI, "';'")
            except _Recover:
                self._skip_statement()
        self._close_brace(open_tok)
        self._groups.append(GroupDecl(kind, name.text, tuple(members), self._loc(start)))

    def _member(self) -> GroupMember:
        tok = self._expect(TokenType.WORD, "a name pattern or group reference")
        loc = self._loc(tok)
        if tok.lower in _GROUP_KINDS and self._peek().type is TokenType.WORD:
            name = self._expect_ident()
            return GroupMember(loc, group=ElementRef(_GROUP_KINDS[tok.lower], name.text, self._loc(name)))
        if not PATTERN_RE.fullmatch(tok.text):
            raise self._fail(tok, f"invalid name pattern {tok.text!r}")
        return GroupMember(loc, pattern=NamePattern(tok.text))

    def _ref(self) -> ElementRef:
        kind_tok = self._expect_keyword(*_REF_KINDS)
        name = self._expect_ident()
        return ElementRef(_REF_KINDS[kind_tok.lower], name.text, self._loc(kind_tok))

    def _block(self) -> None:
        start = self._peek()
        subject = self._ref()
        open_tok = self._expect(TokenType.LBRACE, "'{'")
        statements: list[ConstraintStatement] = []
        while self._peek().type not in (TokenType.RBRACE, TokenType.EOF):
            try:
                statements.append(self._statement(subject))
                self._expect(TokenType.SEMI, "';'")
            except _Recover:
                self._skip_statement()
        self._close_brace(open_tok)
        if not statements:
            self._fail(start, f"constraint block for {subject} contains no statements")
            return
        self._blocks.append(ConstraintBlock(subject, tuple(statements), self._loc(start)))

    def _statement(self, subject: ElementRef) -> ConstraintStatement:
        start = self._peek()
        severity = None
        if start.type is TokenType.LBRACKET:
            self._advance()
            sev = self._expect_keyword(*_SEVERITIES)
            self._expect(TokenType.RBRACKET, "']'")
            severity = _SEVERITIES[sev.lower]
        kind = self._expect_keyword(*_STATEMENT_KINDS)
        self._expect_keyword("dependency")
        self._expect_keyword("to")
        target = self._ref()
        stmt = ConstraintStatement(
            kind=_STATEMENT_KINDS[kind.lower],
            severity=severity,
            subject=subject,
            target=target,
            location=self._loc(start),
            ordinal=self._ordinal,
        )
        self._ordinal += 1
        return stmt


def parse_model(text: str, file_name: str = "<model>") -> DependencyModel:
    """Parse DepCoL text into a :class:`DependencyModel`.

    Statements receive global ordinals in textual order across all blocks.

    Raises:
        DepcolSyntaxError: if the text contains any syntax error. The
            exception carries all errors found, each with a location.
    """
    tokens, diagnostics = tokenize(text, file_name)
    model = _Parser(tokens, file_name, diagnostics).parse()
    if diagnostics:
        raise DepcolSyntaxError(diagnostics)
    return model
