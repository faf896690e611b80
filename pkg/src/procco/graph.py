"""Concrete process-model instance graphs.

An :class:`InstanceGraph` stores entities (particulars of a term kind) with
attribute values, relation edges instantiating the 18 built-in
relationships, and composition edges realizing the work-breakdown
hierarchy. Mutation requires exclusive access; :meth:`InstanceGraph.freeze`
makes a graph immutable, after which it is safe for unrestricted concurrent
reads. Validation and queries expect frozen graphs.

The store is deliberately permissive: unknown attribute names and
kind-nonconforming relation endpoints are accepted here and reported by
the validator, so lint workflows can surface every problem in one pass.
Referential integrity and composition legality are enforced at insertion
because later checks cannot repair them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import (
    CanonicalParseError,
    CompositionCycleError,
    DuplicateEntityError,
    FrozenGraphError,
    InvalidCompositionError,
    MissingEntityError,
)
from .schema import builtin_schema

IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")
NUMBER_RE = re.compile(r"^-?[0-9]+(\.[0-9]+)?$")
DATE_RE = re.compile(
    r"^[0-9]{4}-[0-9]{2}-[0-9]{2}"
    r"(T[0-9]{2}:[0-9]{2}(:[0-9]{2}(\.[0-9]+)?)?(Z|[+-][0-9]{2}:[0-9]{2})?)?$")

# Legal (parent kind, child kind) pairs and the flavor they induce.
# Tasks are atomic and never appear as parents.
COMPOSITION_FLAVORS: dict[tuple[str, str], str] = {
    ("WorkProcess", "WorkProcess"): "subProcessOf",
    ("WorkProcess", "Activity"): "activityPartOf",
    ("Activity", "Activity"): "subActivityOf",
    ("Activity", "Task"): "taskPartOf",
}


@dataclass(frozen=True)
class Scalar:
    """An attribute value: tagged kind plus its canonical lexical form.

    ``kind`` is ``text``, ``date`` or ``number``. Keeping the lexeme makes
    serialization exact (``1.50`` stays ``1.50``).
    """

    kind: str
    lexeme: str

    def __post_init__(self) -> None:
        if self.kind == "date" and not DATE_RE.match(self.lexeme):
            raise ValueError(f"malformed date literal '{self.lexeme}'")
        if self.kind == "number" and not NUMBER_RE.match(self.lexeme):
            raise ValueError(f"malformed number literal '{self.lexeme}'")
        if self.kind not in ("text", "date", "number"):
            raise ValueError(f"unknown scalar kind '{self.kind}'")

    @classmethod
    def text(cls, value: str) -> "Scalar":
        return cls("text", value)

    @classmethod
    def date(cls, value: str) -> "Scalar":
        return cls("date", value)

    @classmethod
    def number(cls, value) -> "Scalar":
        return cls("number", str(value))

    @classmethod
    def coerce(cls, value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, bool):
            raise TypeError("boolean attribute values are not supported")
        if isinstance(value, (int, float)):
            return cls.number(value)
        if isinstance(value, str):
            return cls.text(value)
        raise TypeError(f"cannot store attribute value of type {type(value).__name__}")


@dataclass(frozen=True)
class RelationEdge:
    rel: str
    source: str
    target: str


@dataclass(frozen=True)
class CompositionEdge:
    parent: str
    child: str
    flavor: str


@dataclass
class EntityRecord:
    id: str
    kind: str
    attributes: dict[str, Scalar] = field(default_factory=dict)


class InstanceGraph:
    """Mutable-until-frozen store of entities and edges."""

    def __init__(self) -> None:
        self.entities: dict[str, EntityRecord] = {}
        self.relations: set[RelationEdge] = set()
        self.composition: set[CompositionEdge] = set()
        self._children: dict[str, set[str]] = {}
        self._frozen = False

    # -- equality is structural; the frozen flag is bookkeeping --------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, InstanceGraph):
            return NotImplemented
        return (
            {i: (e.kind, e.attributes) for i, e in self.entities.items()}
            == {i: (e.kind, e.attributes) for i, e in other.entities.items()}
            and self.relations == other.relations
            and self.composition == other.composition
        )

    def __repr__(self) -> str:
        return (f"InstanceGraph(entities={len(self.entities)}, "
                f"relations={len(self.relations)}, composition={len(self.composition)})")

    @property
    def frozen(self) -> bool:
        return self._frozen

    def freeze(self) -> "InstanceGraph":
        """Make the graph immutable. Idempotent; returns self."""
        self._frozen = True
        return self

    def _check_mutable(self) -> None:
        if self._frozen:
            raise FrozenGraphError("graph is frozen")

    # -- mutation -------------------------------------------------------

    def add_entity(self, entity_id: str, kind: str, attributes=None) -> None:
        """Store an entity. Attribute names must be identifiers; unknown
        names are stored and flagged later by the validator."""
        self._check_mutable()
        if not IDENT_RE.match(entity_id or ""):
            raise ValueError(f"entity id {entity_id!r} is not a valid identifier")
        if entity_id in self.entities:
            raise DuplicateEntityError(f"entity '{entity_id}' already exists")
        kind = builtin_schema().term(kind).name
        attrs: dict[str, Scalar] = {}
        for name, value in (attributes or {}).items():
            if not IDENT_RE.match(name or ""):
                raise ValueError(f"attribute name {name!r} is not a valid identifier")
            attrs[name] = Scalar.coerce(value)
        self.entities[entity_id] = EntityRecord(entity_id, kind, attrs)

    def add_relation(self, rel: str, source: str, target: str) -> None:
        """Store a relation edge. Endpoint kinds are not checked here;
        duplicate edges collapse (set semantics)."""
        self._check_mutable()
        rel = builtin_schema().relationship_schema(rel).name
        for endpoint in (source, target):
            if endpoint not in self.entities:
                raise MissingEntityError(f"entity '{endpoint}' not found")
        self.relations.add(RelationEdge(rel, source, target))

    def add_composition(self, parent: str, child: str) -> None:
        """Store a composition edge with its inferred flavor.

        Rejects kind pairs outside the four legal flavors and edges that
        would create a cycle. Duplicate edges collapse.
        """
        self._check_mutable()
        for endpoint in (parent, child):
            if endpoint not in self.entities:
                raise MissingEntityError(f"entity '{endpoint}' not found")
        pk = self.entities[parent].kind
        ck = self.entities[child].kind
        flavor = COMPOSITION_FLAVORS.get((pk, ck))
        if flavor is None:
            if pk == "Task":
                raise InvalidCompositionError(
                    f"'{parent}' is a Task and cannot contain parts")
            raise InvalidCompositionError(
                f"no composition flavor admits a {ck} inside a {pk}")
        if parent == child or self._reaches(child, parent):
            raise CompositionCycleError(
                f"composition edge {parent} -> {child} would create a cycle")
        self.composition.add(CompositionEdge(parent, child, flavor))
        self._children.setdefault(parent, set()).add(child)

    def _reaches(self, start: str, goal: str) -> bool:
        stack = [start]
        seen = set()
        while stack:
            node = stack.pop()
            if node == goal:
                return True
            if node in seen:
                continue
            seen.add(node)
            stack.extend(self._children.get(node, ()))
        return False

    # -- read access ------------------------------------------------------

    def entity(self, entity_id: str) -> EntityRecord:
        try:
            return self.entities[entity_id]
        except KeyError:
            raise MissingEntityError(f"entity '{entity_id}' not found") from None

    def children(self, entity_id: str) -> tuple[str, ...]:
        """Direct composition children, ordered by id."""
        return tuple(sorted(self._children.get(entity_id, ())))

    def relation_targets(self, rel: str, source: str) -> tuple[str, ...]:
        return tuple(sorted(e.target for e in self.relations
                            if e.rel == rel and e.source == source))

    def relation_sources(self, rel: str, target: str) -> tuple[str, ...]:
        return tuple(sorted(e.source for e in self.relations
                            if e.rel == rel and e.target == target))

    def has_relation(self, rel: str, source: str, target: str) -> bool:
        return RelationEdge(rel, source, target) in self.relations


# -- canonical serialization ---------------------------------------------

_HEADER = "procco-graph v1"

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r"}
_UNESCAPES = {"\\": "\\", '"': '"', "n": "\n", "t": "\t", "r": "\r"}


def quote_text(value: str) -> str:
    return '"' + "".join(_ESCAPES.get(ch, ch) for ch in value) + '"'


def unquote_text(token: str) -> str:
    if len(token) < 2 or not token.startswith('"') or not token.endswith('"'):
        raise ValueError("not a quoted string")
    out: list[str] = []
    i = 1
    end = len(token) - 1
    while i < end:
        ch = token[i]
        if ch == "\\":
            if i + 1 >= end:
                raise ValueError("dangling escape")
            esc = token[i + 1]
            if esc not in _UNESCAPES:
                raise ValueError(f"unknown escape '\\{esc}'")
            out.append(_UNESCAPES[esc])
            i += 2
        elif ch == '"':
            raise ValueError("unescaped quote inside string")
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _scalar_literal(value: Scalar) -> str:
    if value.kind == "text":
        return quote_text(value.lexeme)
    return value.lexeme


def export_canonical(graph: InstanceGraph) -> str:
    """Deterministic flat-text form of a graph.

    Entities sorted by id with attributes sorted by name, then relation
    edges, then composition edges, both sorted lexicographically. Output is
    byte-identical for structurally equal graphs.
    """
    lines = [_HEADER]
    for entity_id in sorted(graph.entities):
        record = graph.entities[entity_id]
        lines.append(f"entity {entity_id} {record.kind}")
        for name in sorted(record.attributes):
            value = record.attributes[name]
            lines.append(f"attr {entity_id} {name} {value.kind} {_scalar_literal(value)}")
    for edge in sorted(graph.relations, key=lambda e: (e.rel, e.source, e.target)):
        lines.append(f"rel {edge.rel} {edge.source} {edge.target}")
    for edge in sorted(graph.composition, key=lambda e: (e.parent, e.child)):
        lines.append(f"comp {edge.parent} {edge.child} {edge.flavor}")
    return "\n".join(lines) + "\n"


def _split_fields(line: str, lineno: int, expected: int) -> list[str]:
    # Fields are space-separated; only the trailing field of an attr record
    # may contain spaces (inside a quoted string), so split with a max count.
    fields = line.split(" ", expected - 1)
    if len(fields) != expected:
        raise CanonicalParseError(lineno, f"expected {expected} fields")
    return fields


def import_canonical(text: str) -> InstanceGraph:
    """Parse canonical graph text back into a frozen graph.

    Raises :class:`CanonicalParseError` with the offending line number on
    malformed input.
    """
    lines = text.splitlines()
    if not lines or lines[0] != _HEADER:
        raise CanonicalParseError(1, f"expected header '{_HEADER}'")
    graph = InstanceGraph()
    pending_attrs: list[tuple[int, str, str, str, str]] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        tag = line.split(" ", 1)[0]
        try:
            if tag == "entity":
                _, entity_id, kind = _split_fields(line, lineno, 3)
                graph.add_entity(entity_id, kind)
            elif tag == "attr":
                _, entity_id, name, kind, literal = _split_fields(line, lineno, 5)
                pending_attrs.append((lineno, entity_id, name, kind, literal))
            elif tag == "rel":
                _, rel, source, target = _split_fields(line, lineno, 4)
                graph.add_relation(rel, source, target)
            elif tag == "comp":
                _, parent, child, flavor = _split_fields(line, lineno, 4)
                graph.add_composition(parent, child)
                stored = next(e for e in graph.composition
                              if e.parent == parent and e.child == child)
                if stored.flavor != flavor:
                    raise CanonicalParseError(
                        lineno, f"flavor '{flavor}' does not match endpoint kinds")
            else:
                raise CanonicalParseError(lineno, f"unknown record tag '{tag}'")
        except CanonicalParseError:
            raise
        except Exception as exc:
            raise CanonicalParseError(lineno, str(exc)) from exc
    for lineno, entity_id, name, kind, literal in pending_attrs:
        if entity_id not in graph.entities:
            raise CanonicalParseError(lineno, f"attr for unknown entity '{entity_id}'")
        if not IDENT_RE.match(name):
            raise CanonicalParseError(lineno, f"attribute name {name!r} is not an identifier")
        try:
            if kind == "text":
                value = Scalar.text(unquote_text(literal))
            elif kind == "date":
                if not DATE_RE.match(literal):
                    raise ValueError(f"malformed date literal '{literal}'")
                value = Scalar.date(literal)
            elif kind == "number":
                if not NUMBER_RE.match(literal):
                    raise ValueError(f"malformed number literal '{literal}'")
                value = Scalar("number", literal)
            else:
                raise ValueError(f"unknown value kind '{kind}'")
        except ValueError as exc:
            raise CanonicalParseError(lineno, str(exc)) from exc
        graph.entities[entity_id].attributes[name] = value
    return graph.freeze()
