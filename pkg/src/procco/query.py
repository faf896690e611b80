"""Read-only closure and witness queries over frozen graphs.

Used by the CLI and by axiom diagnostics. All queries are pure,
deterministic, and safe under unrestricted concurrent access to a frozen
graph.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AxiomArityError, InvalidRelationshipError, WrongKindError
from .graph import InstanceGraph
from .schema import AXIOM_SIGNATURES, builtin_schema
from .validator import _CHILD_KINDS, AxiomId

_CLOSURE_RELS = ("consumes", "produces", "involves")


@dataclass(frozen=True)
class WitnessResult:
    """Outcome of an axiom existential: satisfied iff a witness exists."""

    satisfied: bool
    witness: str | None = None

    def __post_init__(self) -> None:
        assert self.satisfied == (self.witness is not None)


def descendants(graph: InstanceGraph, entity_id: str, transitive: bool = False) -> list[str]:
    """Composition children of an entity, ordered by id, root excluded.

    Direct children by default; the full transitive closure with
    ``transitive=True``.
    """
    graph.entity(entity_id)
    if not transitive:
        return list(graph.children(entity_id))
    seen: set[str] = set()
    stack = list(graph.children(entity_id))
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        stack.extend(graph.children(node))
    return sorted(seen)


def closure(graph: InstanceGraph, entity_id: str, rel: str) -> set[str]:
    """Targets of ``rel`` reachable from a work entity or any of its parts.

    ``rel`` must be one of consumes, produces, involves. The result is the
    union of the entity's own targets and those of every transitive
    composition descendant.
    """
    record = graph.entity(entity_id)
    key = builtin_schema().relationship_schema(rel).name
    if key not in _CLOSURE_RELS:
        raise InvalidRelationshipError(
            f"closure supports {', '.join(_CLOSURE_RELS)}; got '{rel}'")
    if not builtin_schema().is_subkind(record.kind, "WorkEntity"):
        raise WrongKindError(
            f"'{entity_id}' has kind {record.kind}; closure requires a WorkEntity")
    targets: set[str] = set(graph.relation_targets(key, entity_id))
    for child in descendants(graph, entity_id, transitive=True):
        targets.update(graph.relation_targets(key, child))
    return targets


def axiom_witness(graph: InstanceGraph, axiom: AxiomId | str,
                  subjects: list[str] | tuple[str, ...]) -> WitnessResult:
    """First composition child (by id) discharging an axiom's existential.

    ``subjects`` binds the axiom's two universal variables, e.g. a work
    process and a role for A5. The smallest qualifying child id is returned
    so diagnostics are reproducible.
    """
    aid = AxiomId(axiom).value
    container_kind, rel, target_kind = AXIOM_SIGNATURES[aid]
    if len(subjects) != 2:
        raise AxiomArityError(f"{aid} binds 2 subjects, got {len(subjects)}")
    container_id, target_id = subjects
    container = graph.entity(container_id)
    target = graph.entity(target_id)
    schema = builtin_schema()
    if container.kind != container_kind:
        raise WrongKindError(
            f"'{container_id}' has kind {container.kind}; {aid} quantifies over {container_kind}")
    if not schema.is_subkind(target.kind, target_kind):
        raise WrongKindError(
            f"'{target_id}' has kind {target.kind}; {aid} quantifies over {target_kind}")
    child_kinds = _CHILD_KINDS[container_kind]
    for child in graph.children(container_id):  # already id-ordered
        if graph.entities[child].kind in child_kinds and graph.has_relation(rel, child, target_id):
            return WitnessResult(True, child)
    return WitnessResult(False, None)
