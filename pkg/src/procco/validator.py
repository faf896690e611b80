"""Static checks over frozen instance graphs.

Five check families produce :class:`Finding` values, never exceptions:

* ``T*`` endpoint-kind conformance of relation edges, plus attribute
  conformance (unknown names, value-type mismatches);
* ``M*`` the 18 multiplicity constraints;
* ``P*`` generalization-set completeness;
* ``C*`` composition well-formedness;
* ``A1``-``A6`` the structural axioms, checked both by an edge-driven
  model checker (:func:`check_axiom`) and by an independent brute-force
  first-order evaluator (:func:`naive_axiom_oracle`) used to cross-validate
  it on small graphs.

Severity policy: upper-bound multiplicity violations and axiom violations
are always errors. Lower-bound (participation) violations, completeness
violations and childless composite work entities are warnings in lenient
mode and errors in strict mode; real models are authored incrementally and
lenient mode keeps them usable. Strict mode only upgrades or adds findings,
never removes any, so the strict finding set is a superset of the lenient
one for every graph.

All checks are read-only; independent checks may run concurrently over a
frozen graph and their findings merge deterministically under the
canonical (code, subjects) sort.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType

from .graph import COMPOSITION_FLAVORS, InstanceGraph
from .schema import (
    AXIOM_SIGNATURES,
    Multiplicity,
    Partition,
    builtin_schema,
    effective_partitions,
)


class Mode(str, Enum):
    LENIENT = "lenient"
    STRICT = "strict"


class AxiomId(str, Enum):
    A1 = "A1"
    A2 = "A2"
    A3 = "A3"
    A4 = "A4"
    A5 = "A5"
    A6 = "A6"


# Existential part of each axiom: which part kinds may discharge the
# obligation of a container kind.
_CHILD_KINDS = {
    "WorkProcess": ("WorkProcess", "Activity"),
    "Activity": ("Activity", "Task"),
}


@dataclass(frozen=True)
class Finding:
    code: str
    severity: str  # "error" | "warning"
    subjects: tuple[str, ...]
    message: str

    def sort_key(self) -> tuple:
        return (self.code, self.subjects, self.message)

    def render(self) -> str:
        subjects = ",".join(self.subjects) if self.subjects else "-"
        return f"{self.code} {self.severity} {subjects}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...]
    mode: Mode
    counts: MappingProxyType

    @property
    def has_errors(self) -> bool:
        return any(f.severity == "error" for f in self.findings)

    @property
    def is_clean(self) -> bool:
        return not self.findings


def _require_frozen(graph: InstanceGraph) -> None:
    if not graph.frozen:
        raise ValueError("validation operates on frozen graphs; call graph.freeze() first")


def _participation_severity(mode: Mode) -> str:
    return "error" if mode is Mode.STRICT else "warning"


# -- T*: endpoint and attribute conformance -----------------------------

def check_types(graph: InstanceGraph) -> list[Finding]:
    """Kind conformance of relation endpoints (T001/T002, errors) and
    attribute conformance per entity (T003 unknown name, T004 value-type
    mismatch; warnings)."""
    _require_frozen(graph)
    schema = builtin_schema()
    findings: list[Finding] = []
    for edge in sorted(graph.relations, key=lambda e: (e.rel, e.source, e.target)):
        rel = schema.relationship_schema(edge.rel)
        source = graph.entities[edge.source]
        target = graph.entities[edge.target]
        if not schema.is_subkind(source.kind, rel.source_kind):
            findings.append(Finding(
                "T001", "error", (edge.source, edge.target),
                f"'{edge.source}' has kind {source.kind}, but '{edge.rel}' "
                f"links from {rel.source_kind}"))
        if not schema.is_subkind(target.kind, rel.target_kind):
            findings.append(Finding(
                "T002", "error", (edge.source, edge.target),
                f"'{edge.target}' has kind {target.kind}, but '{edge.rel}' "
                f"links to {rel.target_kind}"))
    for entity_id in sorted(graph.entities):
        record = graph.entities[entity_id]
        declared = {a.name: a for a in schema.attributes_for(record.kind)}
        for name in sorted(record.attributes):
            value = record.attributes[name]
            attr = declared.get(name)
            if attr is None:
                findings.append(Finding(
                    "T003", "warning", (entity_id,),
                    f"'{entity_id}' has unknown attribute '{name}' for kind {record.kind}"))
            elif not _value_type_matches(attr.value_type.value, value.kind):
                findings.append(Finding(
                    "T004", "warning", (entity_id,),
                    f"'{entity_id}' attribute '{name}' expects {attr.value_type.value}, "
                    f"got {value.kind}"))
    findings.sort(key=Finding.sort_key)
    return findings


def _value_type_matches(declared: str, kind: str) -> bool:
    if declared == "text":
        return kind == "text"
    if declared == "date":
        return kind == "date"
    return kind in ("number", "text")


# -- M*: multiplicities --------------------------------------------------

def check_multiplicities(graph: InstanceGraph, mode: Mode = Mode.LENIENT) -> list[Finding]:
    """Participation counts against the 18 cardinality rows.

    For each relationship and each entity of a participating kind: the
    number of distinct partners must fall inside the declared interval.
    Upper-bound violations are errors (M001 targets, M003 sources);
    lower-bound violations are participation warnings in lenient mode and
    errors in strict mode (M002, M004). A relationship may declare a looser
    lenient target interval where its prose reading is weaker than its
    cardinality row ('is_required_by').
    """
    _require_frozen(graph)
    schema = builtin_schema()
    findings: list[Finding] = []
    lower_severity = _participation_severity(mode)
    for rel in sorted(schema.relationships, key=lambda r: r.name):
        target_mult = rel.target_mult
        if mode is Mode.LENIENT and rel.lenient_target_mult is not None:
            target_mult = rel.lenient_target_mult
        for entity_id in sorted(graph.entities):
            record = graph.entities[entity_id]
            if schema.is_subkind(record.kind, rel.source_kind):
                count = len(graph.relation_targets(rel.name, entity_id))
                findings.extend(_bound_findings(
                    entity_id, rel.name, "targets", count, target_mult,
                    "M001", "M002", lower_severity))
            if schema.is_subkind(record.kind, rel.target_kind):
                count = len(graph.relation_sources(rel.name, entity_id))
                findings.extend(_bound_findings(
                    entity_id, rel.name, "sources", count, rel.source_mult,
                    "M003", "M004", lower_severity))
    findings.sort(key=Finding.sort_key)
    return findings


def _bound_findings(entity_id: str, rel_name: str, end: str, count: int,
                    mult: Multiplicity, upper_code: str, lower_code: str,
                    lower_severity: str) -> list[Finding]:
    out = []
    if mult.upper is not None and count > mult.upper:
        out.append(Finding(
            upper_code, "error", (entity_id,),
            f"'{entity_id}' has {count} '{rel_name}' {end}, upper bound is {mult.upper}"))
    if count < mult.lower:
        out.append(Finding(
            lower_code, lower_severity, (entity_id,),
            f"'{entity_id}' has {count} '{rel_name}' {end}, lower bound is {mult.lower}"))
    return out


# -- P*: partitions --------------------------------------------------------

def check_partitions(graph: InstanceGraph, mode: Mode = Mode.LENIENT,
                     partitions: tuple[Partition, ...] | None = None) -> list[Finding]:
    """Completeness of generalization sets (P001).

    An entity whose kind is exactly the parent of a complete partition must
    really be one of the children. Disjointness cannot be violated
    structurally (an entity has exactly one kind), so it is only asserted
    as a meta-check on the partition data itself.
    """
    _require_frozen(graph)
    schema = builtin_schema()
    parts = partitions if partitions is not None else schema.partitions
    for p in parts:
        assert set(p.children) <= set(schema.children_of(p.parent)), \
            f"partition {p.parent} lists non-children"
    findings: list[Finding] = []
    severity = _participation_severity(mode)
    complete_parents = {p.parent for p in parts if p.complete}
    for entity_id in sorted(graph.entities):
        kind = graph.entities[entity_id].kind
        if kind in complete_parents:
            findings.append(Finding(
                "P001", severity, (entity_id,),
                f"'{entity_id}' instantiates {kind} directly, but the {kind} "
                "partition is complete; use one of its children"))
    findings.sort(key=Finding.sort_key)
    return findings


# -- C*: composition -------------------------------------------------------

def check_composition(graph: InstanceGraph, mode: Mode = Mode.LENIENT) -> list[Finding]:
    """Well-formedness of the work-breakdown hierarchy.

    Work processes and activities are composite by definition, so a
    childless one is flagged (C001: warning lenient, error strict). Nodes
    with several composition parents are legal (parts may be shared) but
    get a strict-mode warning (C002). Flavors are fixed at insertion, so a
    flavor violation here is a program defect and only asserted.
    """
    _require_frozen(graph)
    for edge in graph.composition:
        pk = graph.entities[edge.parent].kind
        ck = graph.entities[edge.child].kind
        assert COMPOSITION_FLAVORS.get((pk, ck)) == edge.flavor, \
            f"corrupt composition flavor on {edge.parent} -> {edge.child}"
    findings: list[Finding] = []
    severity = _participation_severity(mode)
    parent_counts: dict[str, int] = {}
    for edge in graph.composition:
        parent_counts[edge.child] = parent_counts.get(edge.child, 0) + 1
    for entity_id in sorted(graph.entities):
        kind = graph.entities[entity_id].kind
        if kind in ("WorkProcess", "Activity") and not graph.children(entity_id):
            findings.append(Finding(
                "C001", severity, (entity_id,),
                f"{kind} '{entity_id}' has no parts"))
        if mode is Mode.STRICT and parent_counts.get(entity_id, 0) > 1:
            findings.append(Finding(
                "C002", "warning", (entity_id,),
                f"'{entity_id}' is a part of {parent_counts[entity_id]} containers"))
    findings.sort(key=Finding.sort_key)
    return findings


# -- A1-A6: axioms -----------------------------------------------------------

def _axiom_finding(axiom: str, rel: str, source: str, target: str,
                   transitive: bool) -> Finding:
    scope = "part" if transitive else "direct part"
    return Finding(axiom, "error", (source, target),
                   f"'{source}' {rel} '{target}' is not mirrored by any {scope}")


def check_axiom(graph: InstanceGraph, axiom: AxiomId | str,
                transitive: bool = False) -> list[Finding]:
    """Model-check one axiom by walking its relation edges.

    For every edge of the axiom's relation whose source is a composite work
    entity of the quantified kind and whose target has the quantified kind,
    some composition child of the source (direct by default, any descendant
    with ``transitive=True``) of an admissible kind must carry the same
    edge to the same target. One finding per violating (source, target)
    binding.
    """
    _require_frozen(graph)
    aid = AxiomId(axiom).value
    container_kind, rel, target_kind = AXIOM_SIGNATURES[aid]
    child_kinds = _CHILD_KINDS[container_kind]
    schema = builtin_schema()
    findings: list[Finding] = []
    for edge in sorted(graph.relations, key=lambda e: (e.source, e.target)):
        if edge.rel != rel:
            continue
        if graph.entities[edge.source].kind != container_kind:
            continue
        if not schema.is_subkind(graph.entities[edge.target].kind, target_kind):
            continue
        candidates = (_descendant_ids(graph, edge.source) if transitive
                      else graph.children(edge.source))
        discharged = any(
            graph.entities[child].kind in child_kinds
            and graph.has_relation(rel, child, edge.target)
            for child in candidates)
        if not discharged:
            findings.append(_axiom_finding(aid, rel, edge.source, edge.target, transitive))
    return findings


def _descendant_ids(graph: InstanceGraph, root: str) -> tuple[str, ...]:
    seen: set[str] = set()
    stack = list(graph.children(root))
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        stack.extend(graph.children(node))
    return tuple(sorted(seen))


def naive_axiom_oracle(graph: InstanceGraph, axiom: AxiomId | str,
                       transitive: bool = False) -> list[Finding]:
    """Ground-truth evaluation of one axiom by exhaustive enumeration.

    Transcribes the quantifier structure literally: every pair of entities
    is tried for the universals and every entity for each existential
    disjunct. Cost is cubic in the number of entities; intended for small
    graphs and for cross-validating :func:`check_axiom`.
    """
    _require_frozen(graph)
    aid = AxiomId(axiom).value
    container_kind, rel, target_kind = AXIOM_SIGNATURES[aid]
    same_kind, part_kind = _CHILD_KINDS[container_kind]
    schema = builtin_schema()
    ids = sorted(graph.entities)

    def comp_related(parent: str, child: str) -> bool:
        if transitive:
            return child in _descendant_ids(graph, parent)
        return any(e.parent == parent and e.child == child for e in graph.composition)

    findings: list[Finding] = []
    for x in ids:
        for y in ids:
            if graph.entities[x].kind != container_kind:
                continue
            if not schema.is_subkind(graph.entities[y].kind, target_kind):
                continue
            if not graph.has_relation(rel, x, y):
                continue
            first = any(
                graph.entities[z].kind == same_kind
                and graph.has_relation(rel, z, y)
                and comp_related(x, z)
                for z in ids)
            second = any(
                graph.entities[z].kind == part_kind
                and graph.has_relation(rel, z, y)
                and comp_related(x, z)
                for z in ids)
            if not (first or second):
                findings.append(_axiom_finding(aid, rel, x, y, transitive))
    return findings


# -- aggregation ----------------------------------------------------------

def validate(graph: InstanceGraph, mode: Mode = Mode.LENIENT,
             partitions: tuple[Partition, ...] | None = None,
             partition_overrides: dict[str, tuple[bool, bool]] | None = None,
             transitive_axioms: bool = False) -> ValidationReport:
    """Run every check and merge the findings into one deterministic report.

    Pure function of (graph, mode, partition configuration): running it
    twice yields identical reports. Problems are findings, not failures.
    """
    _require_frozen(graph)
    if partitions is None:
        partitions = effective_partitions(builtin_schema(), partition_overrides)
    findings: list[Finding] = []
    findings.extend(check_types(graph))
    findings.extend(check_multiplicities(graph, mode))
    findings.extend(check_partitions(graph, mode, partitions))
    findings.extend(check_composition(graph, mode))
    for aid in AxiomId:
        findings.extend(check_axiom(graph, aid, transitive_axioms))
    findings.sort(key=Finding.sort_key)
    counts: dict[str, int] = {}
    for f in findings:
        counts[f.code] = counts.get(f.code, 0) + 1
    return ValidationReport(tuple(findings), mode, MappingProxyType(counts))


# -- report rendering --------------------------------------------------------

def render_report_text(report: ValidationReport) -> str:
    """One finding per line: ``CODE severity subjects: message``."""
    return "".join(f.render() + "\n" for f in report.findings)


def render_report_canonical(report: ValidationReport) -> str:
    """Stable tab-delimited report for machine consumption."""
    lines = ["procco-report\tv1", f"mode\t{report.mode.value}"]
    for f in report.findings:
        subjects = ",".join(f.subjects) if f.subjects else "-"
        lines.append(f"finding\t{f.code}\t{f.severity}\t{subjects}\t{f.message}")
    for code in sorted(report.counts):
        lines.append(f"count\t{code}\t{report.counts[code]}")
    return "\n".join(lines) + "\n"
