"""Parser and formatter for the ``.pco`` process-model DSL.

The surface is statement oriented, which keeps error recovery trivial:

    entity <id> : <TermKind> { <attr> = <value> ... }
    rel <relname> <sourceId> -> <targetId>
    comp <parentId> contains <childId>

``#`` starts a line comment. Values are quoted strings (with ``\\``, ``\"``,
``\\n``, ``\\t``, ``\\r`` escapes), decimal numbers, or bare ISO-8601
date-times. Identifiers match ``[A-Za-z_][A-Za-z0-9_.-]*``; ``entity``,
``rel``, ``comp`` and ``contains`` are reserved. Term and relationship
names are matched case-sensitively against the built-in schema;
multi-word relationship names are written with underscores
(``deals_with_work_entity``).

Parsing never halts on the first problem: the parser resynchronizes at the
next statement keyword and reports every independent error in one pass,
each with the line and column of the offending token. Input must be UTF-8;
invalid bytes are fatal (P000).

Diagnostic codes
    P000 invalid input encoding (fatal)
    P001 unknown keyword / general syntax error
    P002 unknown term kind
    P003 duplicate entity id
    P004 unknown relationship
    P005 dangling entity reference
    P006 malformed attribute (errors) or attribute type mismatch (warnings)
    P007 illegal composition
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    CompositionCycleError,
    DuplicateEntityError,
    InvalidCompositionError,
)
from .graph import DATE_RE, NUMBER_RE, InstanceGraph, Scalar, quote_text
from .schema import ValueType, builtin_schema

KEYWORDS = frozenset({"entity", "rel", "comp", "contains"})

_IDENT_START = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CONT = _IDENT_START | frozenset("0123456789.-")
_VALUE_CONT = frozenset("0123456789TZ:.+-")


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    code: str
    message: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.severity} {self.code}: {self.message}"


@dataclass(frozen=True)
class SourceDocument:
    text: str
    origin: str = "<string>"


@dataclass(frozen=True)
class _Token:
    type: str  # KEYWORD IDENT STRING NUMBER DATE LBRACE RBRACE COLON EQUALS ARROW BAD EOF
    lexeme: str
    line: int
    column: int


class _Lexer:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1
        self.diagnostics: list[Diagnostic] = []

    def _advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.pos < len(self.text) and self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def tokens(self) -> list[_Token]:
        out: list[_Token] = []
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch in " \t\r\n":
                self._advance()
                continue
            if ch == "#":
                while self.pos < len(text) and text[self.pos] != "\n":
                    self._advance()
                continue
            line, col = self.line, self.col
            if ch == "{":
                out.append(_Token("LBRACE", ch, line, col))
                self._advance()
            elif ch == "}":
                out.append(_Token("RBRACE", ch, line, col))
                self._advance()
            elif ch == ":":
                out.append(_Token("COLON", ch, line, col))
                self._advance()
            elif ch == "=":
                out.append(_Token("EQUALS", ch, line, col))
                self._advance()
            elif text.startswith("->", self.pos):
                out.append(_Token("ARROW", "->", line, col))
                self._advance(2)
            elif ch == '"':
                out.append(self._string(line, col))
            elif ch in _IDENT_START:
                start = self.pos
                while self.pos < len(text) and text[self.pos] in _IDENT_CONT:
                    self._advance()
                word = text[start:self.pos]
                out.append(_Token("KEYWORD" if word in KEYWORDS else "IDENT", word, line, col))
            elif ch.isdigit() or ch == "-":
                start = self.pos
                self._advance()
                while self.pos < len(text) and text[self.pos] in _VALUE_CONT:
                    self._advance()
                word = text[start:self.pos]
                if DATE_RE.match(word):
                    out.append(_Token("DATE", word, line, col))
                elif NUMBER_RE.match(word):
                    out.append(_Token("NUMBER", word, line, col))
                else:
                    out.append(_Token("BAD", word, line, col))
            else:
                out.append(_Token("BAD", ch, line, col))
                self._advance()
        out.append(_Token("EOF", "", self.line, self.col))
        return out

    def _string(self, line: int, col: int) -> _Token:
        text = self.text
        self._advance()  # opening quote
        chars: list[str] = []
        while self.pos < len(text):
            ch = text[self.pos]
            if ch == '"':
                self._advance()
                return _Token("STRING", "".join(chars), line, col)
            if ch == "\n":
                break
            if ch == "\\":
                if self.pos + 1 >= len(text):
                    break
                esc = text[self.pos + 1]
                mapped = {"\\": "\\", '"': '"', "n": "\n", "t": "\t", "r": "\r"}.get(esc)
                if mapped is None:
                    self.diagnostics.append(Diagnostic(
                        "error", "P006", f"unknown escape '\\{esc}' in string",
                        self.line, self.col + 1))
                    self._advance(2)
                    continue
                chars.append(mapped)
                self._advance(2)
                continue
            chars.append(ch)
            self._advance()
        self.diagnostics.append(Diagnostic("error", "P001", "unterminated string", line, col))
        return _Token("BAD", "".join(chars), line, col)


@dataclass
class _EntityStmt:
    id_token: _Token
    kind_token: _Token
    attrs: list[tuple[_Token, Scalar]] = field(default_factory=list)


@dataclass
class _RelStmt:
    name_token: _Token
    source_token: _Token
    target_token: _Token


@dataclass
class _CompStmt:
    parent_token: _Token
    child_token: _Token


class _Parser:
    def __init__(self, tokens: list[_Token]) -> None:
        self.tokens = tokens
        self.pos = 0
        self.diagnostics: list[Diagnostic] = []
        self.statements: list = []

    def _peek(self) -> _Token:
        return self.tokens[self.pos]

    def _next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.type != "EOF":
            self.pos += 1
        return tok

    def _error(self, code: str, message: str, tok: _Token) -> None:
        self.diagnostics.append(Diagnostic("error", code, message, tok.line, tok.column))

    def _warn(self, code: str, message: str, tok: _Token) -> None:
        self.diagnostics.append(Diagnostic("warning", code, message, tok.line, tok.column))

    def _recover(self) -> None:
        """Skip to the next statement keyword so later statements still parse."""
        while self._peek().type not in ("EOF",) and not (
                self._peek().type == "KEYWORD" and self._peek().lexeme in ("entity", "rel", "comp")):
            self._next()

    def _expect_ident(self, what: str) -> _Token | None:
        tok = self._peek()
        if tok.type == "IDENT":
            return self._next()
        self._error("P001", f"expected {what}, got {tok.lexeme!r}" if tok.lexeme
                    else f"expected {what}", tok)
        return None

    def parse(self) -> None:
        while True:
            tok = self._peek()
            if tok.type == "EOF":
                return
            if tok.type == "KEYWORD" and tok.lexeme == "entity":
                self._entity_stmt()
            elif tok.type == "KEYWORD" and tok.lexeme == "rel":
                self._rel_stmt()
            elif tok.type == "KEYWORD" and tok.lexeme == "comp":
                self._comp_stmt()
            else:
                self._error("P001", f"unknown keyword {tok.lexeme!r}, expected "
                            "'entity', 'rel' or 'comp'", tok)
                self._next()
                self._recover()

    def _entity_stmt(self) -> None:
        self._next()  # 'entity'
        id_token = self._expect_ident("an entity id")
        if id_token is None:
            self._recover()
            return
        if self._peek().type != "COLON":
            self._error("P001", "expected ':' after entity id", self._peek())
            self._recover()
            return
        self._next()
        kind_token = self._expect_ident("a term kind")
        if kind_token is None:
            self._recover()
            return
        stmt = _EntityStmt(id_token, kind_token)
        if self._peek().type != "LBRACE":
            self._error("P001", "expected '{' to open the attribute block", self._peek())
            self._recover()
            return
        self._next()
        seen: dict[str, int] = {}
        while True:
            tok = self._peek()
            if tok.type == "RBRACE":
                self._next()
                break
            if tok.type == "EOF" or (tok.type == "KEYWORD" and tok.lexeme in ("entity", "rel", "comp")):
                self._error("P001", "expected '}' to close the attribute block", tok)
                break
            if tok.type != "IDENT":
                self._error("P006", f"expected an attribute name, got {tok.lexeme!r}", tok)
                self._next()
                continue
            name_token = self._next()
            if self._peek().type != "EQUALS":
                self._error("P006", f"expected '=' after attribute '{name_token.lexeme}'",
                            self._peek())
                continue
            self._next()
            value_token = self._next()
            if value_token.type == "STRING":
                value = Scalar.text(value_token.lexeme)
            elif value_token.type == "NUMBER":
                value = Scalar("number", value_token.lexeme)
            elif value_token.type == "DATE":
                value = Scalar("date", value_token.lexeme)
            else:
                self._error("P006", f"malformed attribute value {value_token.lexeme!r}",
                            value_token)
                continue
            if name_token.lexeme in seen:
                self._warn("P006", f"duplicate attribute '{name_token.lexeme}' "
                           "(last value wins)", name_token)
                stmt.attrs[seen[name_token.lexeme]] = (name_token, value)
            else:
                seen[name_token.lexeme] = len(stmt.attrs)
                stmt.attrs.append((name_token, value))
        self.statements.append(stmt)

    def _rel_stmt(self) -> None:
        self._next()  # 'rel'
        name = self._expect_ident("a relationship name")
        if name is None:
            self._recover()
            return
        source = self._expect_ident("a source entity id")
        if source is None:
            self._recover()
            return
        if self._peek().type != "ARROW":
            self._error("P001", "expected '->' between source and target", self._peek())
            self._recover()
            return
        self._next()
        target = self._expect_ident("a target entity id")
        if target is None:
            self._recover()
            return
        self.statements.append(_RelStmt(name, source, target))

    def _comp_stmt(self) -> None:
        self._next()  # 'comp'
        parent = self._expect_ident("a parent entity id")
        if parent is None:
            self._recover()
            return
        tok = self._peek()
        if not (tok.type == "KEYWORD" and tok.lexeme == "contains"):
            self._error("P001", "expected 'contains' between parent and child", tok)
            self._recover()
            return
        self._next()
        child = self._expect_ident("a child entity id")
        if child is None:
            self._recover()
            return
        self.statements.append(_CompStmt(parent, child))


def _type_matches(declared: ValueType, value: Scalar) -> bool:
    if declared is ValueType.TEXT:
        return value.kind == "text"
    if declared is ValueType.DATE:
        return value.kind == "date"
    return value.kind in ("number", "text")  # NUMBER_OR_TEXT


def parse(source: SourceDocument | str) -> tuple[InstanceGraph | None, list[Diagnostic]]:
    """Parse DSL text into a frozen graph.

    Returns ``(graph, warnings)`` on success and ``(None, diagnostics)``
    when any error-severity diagnostic was produced. Diagnostics are sorted
    by source position.
    """
    text = source.text if isinstance(source, SourceDocument) else source
    lexer = _Lexer(text)
    tokens = lexer.tokens()
    parser = _Parser(tokens)
    parser.parse()
    diagnostics = lexer.diagnostics + parser.diagnostics

    schema = builtin_schema()
    graph = InstanceGraph()
    bad_ids: set[str] = set()

    for stmt in parser.statements:
        if not isinstance(stmt, _EntityStmt):
            continue
        entity_id = stmt.id_token.lexeme
        kind = stmt.kind_token.lexeme
        if not schema.has_term(kind):
            diagnostics.append(Diagnostic(
                "error", "P002", f"unknown term kind '{kind}'",
                stmt.kind_token.line, stmt.kind_token.column))
            bad_ids.add(entity_id)
            continue
        if entity_id in graph.entities:
            diagnostics.append(Diagnostic(
                "error", "P003", f"duplicate entity id '{entity_id}'",
                stmt.id_token.line, stmt.id_token.column))
            continue
        attrs = {tok.lexeme: value for tok, value in stmt.attrs}
        graph.add_entity(entity_id, kind, attrs)
        for name_token, value in stmt.attrs:
            declared = schema.attribute_schema(kind, name_token.lexeme)
            if declared is not None and not _type_matches(declared.value_type, value):
                diagnostics.append(Diagnostic(
                    "warning", "P006",
                    f"attribute '{name_token.lexeme}' of {kind} expects "
                    f"{declared.value_type.value}, got {value.kind}",
                    name_token.line, name_token.column))

    for stmt in parser.statements:
        if isinstance(stmt, _RelStmt):
            name = stmt.name_token.lexeme
            if not schema.has_relationship(name):
                diagnostics.append(Diagnostic(
                    "error", "P004", f"unknown relationship '{name}'",
                    stmt.name_token.line, stmt.name_token.column))
                continue
            ok = True
            for tok in (stmt.source_token, stmt.target_token):
                if tok.lexeme not in graph.entities:
                    ok = False
                    if tok.lexeme not in bad_ids:
                        diagnostics.append(Diagnostic(
                            "error", "P005", f"reference to undeclared entity '{tok.lexeme}'",
                            tok.line, tok.column))
            if ok:
                graph.add_relation(name, stmt.source_token.lexeme, stmt.target_token.lexeme)
        elif isinstance(stmt, _CompStmt):
            ok = True
            for tok in (stmt.parent_token, stmt.child_token):
                if tok.lexeme not in graph.entities:
                    ok = False
                    if tok.lexeme not in bad_ids:
                        diagnostics.append(Diagnostic(
                            "error", "P005", f"reference to undeclared entity '{tok.lexeme}'",
                            tok.line, tok.column))
            if not ok:
                continue
            try:
                graph.add_composition(stmt.parent_token.lexeme, stmt.child_token.lexeme)
            except (InvalidCompositionError, CompositionCycleError) as exc:
                diagnostics.append(Diagnostic(
                    "error", "P007", str(exc),
                    stmt.parent_token.line, stmt.parent_token.column))

    diagnostics.sort(key=lambda d: (d.line, d.column, d.code, d.message))
    if any(d.severity == "error" for d in diagnostics):
        return None, diagnostics
    return graph.freeze(), diagnostics


def parse_bytes(data: bytes, origin: str = "<bytes>") -> tuple[InstanceGraph | None, list[Diagnostic]]:
    """Decode and parse raw input. Invalid UTF-8 is fatal (P000)."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        line = data[:exc.start].count(b"\n") + 1
        return None, [Diagnostic("error", "P000",
                                 f"input is not valid UTF-8 at byte {exc.start}", line, 1)]
    return parse(SourceDocument(text, origin))


def _format_value(value: Scalar) -> str:
    if value.kind == "text":
        return quote_text(value.lexeme)
    return value.lexeme


def format_graph(graph: InstanceGraph) -> SourceDocument:
    """Render a graph as canonical DSL.

    Deterministic: entities sorted by id (attributes by name), then relation
    edges, then composition edges. ``parse(format_graph(g))`` reproduces
    ``g`` exactly; for schema-conformant graphs it emits no diagnostics.
    """
    lines: list[str] = []
    for entity_id in sorted(graph.entities):
        record = graph.entities[entity_id]
        if not record.attributes:
            lines.append(f"entity {entity_id} : {record.kind} {{}}")
            continue
        lines.append(f"entity {entity_id} : {record.kind} {{")
        for name in sorted(record.attributes):
            lines.append(f"  {name} = {_format_value(record.attributes[name])}")
        lines.append("}")
    for edge in sorted(graph.relations, key=lambda e: (e.rel, e.source, e.target)):
        lines.append(f"rel {edge.rel} {edge.source} -> {edge.target}")
    for edge in sorted(graph.composition, key=lambda e: (e.parent, e.child)):
        lines.append(f"comp {edge.parent} contains {edge.child}")
    text = "\n".join(lines) + "\n" if lines else ""
    return SourceDocument(text, "<formatted>")
