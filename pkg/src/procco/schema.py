"""Built-in ProcessCO v1.3 ontology.

This module is the single source of truth for the ontology the rest of the
package validates against: the 30 term kinds and their taxonomy, the 30
attribute schemas, the 18 cardinality-constrained relationships with their
foundational-ontology parents, the generalization-set (partition) labels,
and the identifiers of the six structural axioms.

The schema is immutable after construction and safe for unrestricted
concurrent reads. :func:`builtin_schema` returns a cached instance; a
failed internal consistency self-check is a program defect and raises at
first use.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType

from .errors import InvalidTermError, InvalidRelationshipError, PartitionConfigError

AXIOM_IDS = ("A1", "A2", "A3", "A4", "A5", "A6")

# Axiom signature: universally quantified container kind, the relation that
# must be mirrored, and the kind of the related target. The existential part
# (which part kinds may discharge the obligation) follows from the
# composition flavor rules in procco.graph.
AXIOM_SIGNATURES: dict[str, tuple[str, str, str]] = {
    "A1": ("WorkProcess", "consumes", "ProductEntity"),
    "A2": ("Activity", "consumes", "ProductEntity"),
    "A3": ("WorkProcess", "produces", "WorkProduct"),
    "A4": ("Activity", "produces", "WorkProduct"),
    "A5": ("WorkProcess", "involves", "Role"),
    "A6": ("Activity", "involves", "Role"),
}


class Stereotype(str, Enum):
    """Foundational-ontology term a ProcessCO term specializes."""

    THING = "Thing"
    THING_CATEGORY = "ThingCategory"
    ASSERTION = "Assertion"
    ASSERTION_ON_PARTICULARS = "AssertionOnParticulars"


class ValueType(str, Enum):
    """Declared value space of an attribute."""

    TEXT = "text"
    DATE = "date"
    NUMBER_OR_TEXT = "number_or_text"


class TfoName(str, Enum):
    """The five foundational relationship names the 18 relationships refine."""

    INTERACTS_WITH_OTHER = "interacts_with_other"
    DEALS_WITH_PARTICULARS = "deals_with_particulars"
    DEFINES = "defines"
    RELATES_WITH = "relates_with"
    BELONGS_TO = "belongs_to"


@dataclass(frozen=True, order=True)
class Multiplicity:
    """A UML-style multiplicity interval.

    Only the three forms used by the built-in schema occur there:
    ``*`` (0..unbounded), ``1..*`` (1..unbounded) and ``1`` (1..1).
    """

    lower: int
    upper: int | None  # None = unbounded

    def __post_init__(self) -> None:
        if self.lower < 0:
            raise ValueError(f"multiplicity lower bound must be >= 0, got {self.lower}")
        if self.upper is not None and self.upper < max(self.lower, 1):
            raise ValueError(f"multiplicity upper bound {self.upper} below lower {self.lower}")

    @classmethod
    def parse(cls, text: str) -> "Multiplicity":
        text = text.strip()
        if text == "*":
            return cls(0, None)
        if text.endswith("..*"):
            return cls(int(text[:-3]), None)
        if ".." in text:
            lo, hi = text.split("..", 1)
            return cls(int(lo), int(hi))
        n = int(text)
        return cls(n, n)

    def admits(self, count: int) -> bool:
        """True when ``count`` partners satisfy this interval."""
        if count < self.lower:
            return False
        return self.upper is None or count <= self.upper

    def within(self, parent: "Multiplicity") -> bool:
        """True when this interval is contained in ``parent`` (narrowing or equal)."""
        if self.lower < parent.lower:
            return False
        if parent.upper is None:
            return True
        return self.upper is not None and self.upper <= parent.upper

    def __str__(self) -> str:
        if self.lower == 0 and self.upper is None:
            return "*"
        if self.upper is None:
            return f"{self.lower}..*"
        if self.lower == self.upper:
            return str(self.lower)
        return f"{self.lower}..{self.upper}"


STAR = Multiplicity(0, None)
ONE_PLUS = Multiplicity(1, None)
ONE = Multiplicity(1, 1)


@dataclass(frozen=True)
class TermKind:
    """One of the 30 built-in term kinds."""

    name: str  # identifier, e.g. "WorkEntity"
    display_name: str  # table label, e.g. "Work Entity"
    parent: str | None  # taxonomic supertype name, None for roots
    tfo_stereotype: Stereotype
    stereotype_detail: str
    definition: str
    synonyms: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class AttributeSchema:
    """An attribute owned by one term kind and inherited by its descendants."""

    owner: str
    name: str
    value_type: ValueType
    definition: str


@dataclass(frozen=True)
class ThingFORelation:
    """The foundational relationship a built-in relationship refines,
    with the cardinalities and end-term labels of its own row."""

    name: TfoName
    source_card: Multiplicity
    target_card: Multiplicity
    source_term: str
    target_term: str


@dataclass(frozen=True)
class RelationshipSchema:
    """One of the 18 non-taxonomic relationships.

    Multiplicity convention: ``target_mult`` bounds how many targets each
    source instance links to; ``source_mult`` bounds how many sources link
    to each target instance. ``lenient_target_mult``, when set, replaces
    ``target_mult`` in lenient validation (used where the relationship's
    prose reading is weaker than its cardinality row).
    """

    name: str  # identifier, e.g. "deals_with_work_entity"
    display_name: str  # table label, e.g. "deals with work entity"
    source_kind: str
    target_kind: str
    source_mult: Multiplicity
    target_mult: Multiplicity
    definition: str
    tfo_parent: ThingFORelation
    lenient_target_mult: Multiplicity | None = None


@dataclass(frozen=True)
class Partition:
    """A generalization set: the direct children of a parent term with
    disjointness and completeness labels."""

    parent: str
    children: tuple[str, ...]
    disjoint: bool
    complete: bool


def _tk(
    name: str,
    display: str,
    parent: str | None,
    stereo: Stereotype,
    detail: str,
    definition: str,
    synonyms: tuple[str, ...] = (),
    notes: tuple[str, ...] = (),
) -> TermKind:
    return TermKind(name, display, parent, stereo, detail, definition, synonyms, notes)


_THING = Stereotype.THING
_CAT = Stereotype.THING_CATEGORY
_ASSERT = Stereotype.ASSERTION
_AOP = Stereotype.ASSERTION_ON_PARTICULARS

_TERMS: tuple[TermKind, ...] = (
    _tk("Activity", "Activity", "WorkEntity", _THING, "Thing (a particular)",
        "Mid-granularity work entity built from nested sub-activities and tasks."),
    _tk("Agent", "Agent", "WorkResource", _THING, "Thing (a particular)",
        "Work resource that carries out tasks in compliance with a role."),
    _tk("Allocation", "Allocation", None, _AOP, "Allotment-related Assertion",
        "Assertion recording the assignment of work resources to work entities.",
        synonyms=("Allotment",)),
    _tk("AllocationModel", "Allocation Model", "Artifact", _THING, "Thing (a particular)",
        "Artifact that records and models allocations of work resources.",
        synonyms=("Allotment Model",)),
    _tk("Artifact", "Artifact", "WorkProduct", _THING, "Thing (a particular)",
        "Tangible or intangible work product that is versionable and deliverable.",
        notes=("Owns the state and version attributes.",)),
    _tk("AutomatedAgent", "Automated Agent", "Agent", _THING, "Thing (a particular)",
        "Non-human agent, such as a software agent or a robot."),
    _tk("Condition", "Condition", None, _ASSERT, "Constraint-related Assertion",
        "Constraint that must hold when a work entity starts or finishes."),
    _tk("HumanAgent", "Human Agent", "Agent", _THING, "Thing (a particular)",
        "Human agent: a person assigned to work under a role."),
    _tk("Method", "Method", "WorkResource", _THING, "Thing (a particular)",
        "Work resource prescribing how the steps of a work description are carried out.",
        notes=("Owns the procedure, rules and references attributes.",)),
    _tk("Money", "Money", "WorkResource", _THING, "Thing (a particular)",
        "Work resource accepted as a medium of exchange and payment."),
    _tk("NaturalProduct", "Natural Product", "ProductEntity", _THING, "Thing (a particular)",
        "Product entity arising from natural processes rather than from work."),
    _tk("Outcome", "Outcome", "WorkProduct", _THING, "Thing (a particular)",
        "Intangible, storable and processable work product."),
    _tk("ProcessCategory", "Process Category", None, _CAT, "Thing Category (a universal)",
        "Universal grouping process-level kinds of work."),
    _tk("ProcessModel", "Process Model", "Artifact", _THING, "Thing (a particular)",
        "Artifact that records and models one or more related process perspectives."),
    _tk("ProcessPerspective", "Process Perspective", None, _AOP, "Assertion on Particulars",
        "Functional, informational, behavioral, methodological or organizational view over work entities.",
        synonyms=("Process View",)),
    _tk("ProductCategory", "Product Category", None, _CAT, "Thing Category (a universal)",
        "Universal to which concrete product entities belong."),
    _tk("ProductEntity", "Product Entity", None, _THING, "Thing (a particular)",
        "Particular produced naturally or yielded artificially by work."),
    _tk("ResourceCategory", "Resource Category", None, _CAT, "Thing Category (a universal)",
        "Universal to which concrete resource entities belong."),
    _tk("ResourceEntity", "Resource Entity", None, _THING, "Thing (a particular)",
        "Particular representing an available asset usable or allocatable as support."),
    _tk("Role", "Role", None, _ASSERT, "Behavior-related Assertion",
        "Skill set an agent must possess to take part in a work entity."),
    _tk("Service", "Service", "WorkProduct", _THING, "Thing (a particular)",
        "Intangible, non-storable and deliverable work product."),
    _tk("Strategy", "Strategy", "WorkResource", _THING, "Thing (a particular)",
        "Work resource bundling principles, process views and methods toward a project goal."),
    _tk("Task", "Task", "WorkEntity", _THING, "Thing (a particular)",
        "Atomic, finest-grained work entity.",
        notes=("Terminal in the composition hierarchy: a task admits no parts.",)),
    _tk("Time", "Time", "WorkResource", _THING, "Thing (a particular)",
        "Work resource: the perishable, non-storable continuum scheduled against work entities."),
    _tk("Tool", "Tool", "WorkResource", _THING, "Thing (a particular)",
        "Work resource: an instrument that automates or supports method procedures and rules.",
        synonyms=("Instrument",),
        notes=("Owns the description and references attributes.",)),
    _tk("WorkEntity", "Work Entity", None, _THING, "Thing (a particular)",
        "Particular describing work through the products it consumes and produces, its conditions and the roles it involves."),
    _tk("WorkEntitySubCategory", "Work Entity sub-Category", "ProcessCategory", _CAT,
        "Thing Category (a universal)",
        "Process sub-category grouping concrete work entities."),
    _tk("WorkProcess", "Work Process", "WorkEntity", _THING, "Thing (a particular)",
        "Coarse-grained work entity built from sub-processes and activities.",
        synonyms=("Process",)),
    _tk("WorkProduct", "Work Product", "ProductEntity", _THING, "Thing (a particular)",
        "Product entity consumed or produced by a work entity."),
    _tk("WorkResource", "Work Resource", "ResourceEntity", _THING, "Thing (a particular)",
        "Resource entity that can be allotted and assigned to work entities.",
        notes=("Owns the level attribute.",)),
)

_T = ValueType.TEXT
_D = ValueType.DATE
_NT = ValueType.NUMBER_OR_TEXT

# Declaration order per owner is meaningful: attributes_for() preserves it.
_ATTRIBUTES: tuple[AttributeSchema, ...] = (
    AttributeSchema("Allocation", "name", _T, "Label identifying the allocation."),
    AttributeSchema("Allocation", "statement", _T, "Textual statement of what is allotted to what."),
    AttributeSchema("AllocationModel", "specification", _T,
                    "Detailed representation of the allocations in a chosen language."),
    AttributeSchema("Agent", "capabilities", _T, "Abilities the agent brings as a performer."),
    AttributeSchema("Artifact", "state", _T, "State the artifact is in."),
    AttributeSchema("Artifact", "version", _T, "Identifier marking the artifact's level of evolution."),
    AttributeSchema("Condition", "specification", _T,
                    "Unambiguous constraint text that must be satisfied or evaluate to true."),
    AttributeSchema("Method", "procedure", _T,
                    "Ordered instructions realizing the steps of a work description."),
    AttributeSchema("Method", "rules", _T, "Principles and heuristics attached to the procedure."),
    AttributeSchema("Method", "references", _T, "Citations or URLs with further method information."),
    AttributeSchema("Outcome", "value", _NT, "Numerical or categorical result."),
    AttributeSchema("ProcessModel", "specification", _T,
                    "Detailed representation of the modeled perspectives in a chosen language."),
    AttributeSchema("ProcessPerspective", "name", _T, "Label identifying the perspective."),
    AttributeSchema("ProcessPerspective", "statement", _T,
                    "Textual statement describing the perspective."),
    AttributeSchema("ProductEntity", "name", _T, "Label identifying the product entity."),
    AttributeSchema("ProductEntity", "description", _T, "Textual description of the product entity."),
    AttributeSchema("ResourceEntity", "name", _T, "Label identifying the resource entity."),
    AttributeSchema("ResourceEntity", "description", _T, "Textual description of the resource entity."),
    AttributeSchema("Role", "name", _T, "Label identifying the role."),
    AttributeSchema("Role", "skills", _T,
                    "Capabilities, competencies and responsibilities the role demands."),
    AttributeSchema("Task", "steps_specification", _T,
                    "Steps to follow in order to achieve the task objective."),
    AttributeSchema("Tool", "description", _T, "Textual description of the tool."),
    AttributeSchema("Tool", "references", _T, "Citations or URLs with further tool information."),
    AttributeSchema("WorkEntity", "name", _T, "Label identifying the work entity."),
    AttributeSchema("WorkEntity", "objective", _T, "Aim or end the work entity exists to reach."),
    AttributeSchema("WorkEntity", "description", _T,
                    "What must be done to reach the objective (not how)."),
    AttributeSchema("WorkEntity", "status", _T, "State the work entity is in."),
    AttributeSchema("WorkEntity", "start_date", _D, "When the work entity starts."),
    AttributeSchema("WorkEntity", "end_date", _D, "When the work entity ends."),
    AttributeSchema("WorkResource", "level", _T,
                    "Level (strategic, project or task) at which the resource is assigned."),
)


def _tfo(name: TfoName, s: Multiplicity, t: Multiplicity, sterm: str, tterm: str) -> ThingFORelation:
    return ThingFORelation(name, s, t, sterm, tterm)


_POWER_THING = "(Power of) Thing"
_AOP_TERM = "Assertion on Particulars"

_RELATIONSHIPS: tuple[RelationshipSchema, ...] = (
    RelationshipSchema(
        "consumes", "consumes", "WorkEntity", "ProductEntity", STAR, ONE_PLUS,
        "A work entity takes in one or more product entities to reach its objective.",
        _tfo(TfoName.INTERACTS_WITH_OTHER, ONE_PLUS, ONE_PLUS, _POWER_THING, "Thing")),
    RelationshipSchema(
        "deals_with", "deals with", "Allocation", "WorkResource", ONE_PLUS, ONE_PLUS,
        "An allocation covers one or more work resources.",
        _tfo(TfoName.DEALS_WITH_PARTICULARS, ONE_PLUS, ONE_PLUS, _AOP_TERM, "Thing")),
    RelationshipSchema(
        "deals_with_work_entity", "deals with work entity",
        "ProcessPerspective", "WorkEntity", ONE_PLUS, ONE_PLUS,
        "A process perspective covers one or more work entities.",
        _tfo(TfoName.DEALS_WITH_PARTICULARS, ONE_PLUS, ONE_PLUS, _AOP_TERM, "Thing")),
    RelationshipSchema(
        "involves", "involves", "WorkEntity", "Role", ONE_PLUS, ONE_PLUS,
        "A work entity engages one or more roles; a role may take part in several work entities.",
        _tfo(TfoName.DEFINES, STAR, STAR, "Thing", "Assertion")),
    RelationshipSchema(
        "is_applicable", "is applicable", "Method", "Task", ONE_PLUS, ONE,
        "A method applies to the description of exactly one task; a task may admit several methods.",
        _tfo(TfoName.RELATES_WITH, ONE_PLUS, ONE_PLUS, "Thing", "Thing")),
    RelationshipSchema(
        "is_assigned_to", "is assigned to", "Allocation", "WorkEntity", ONE_PLUS, STAR,
        "A scheduled allocation of work resources is assigned to work entities for their enactment.",
        _tfo(TfoName.DEALS_WITH_PARTICULARS, ONE_PLUS, ONE_PLUS, _AOP_TERM, "Thing")),
    RelationshipSchema(
        "is_played_by", "is played by", "Role", "Agent", ONE_PLUS, ONE_PLUS,
        "A role is filled by one or more agents; an agent fills one or more roles.",
        _tfo(TfoName.DEALS_WITH_PARTICULARS, ONE_PLUS, ONE_PLUS, _AOP_TERM, "Thing")),
    RelationshipSchema(
        "is_related_with", "is related with", "ProductEntity", "ProductEntity", ONE_PLUS, STAR,
        "A product entity may reference any number of other product entities.",
        _tfo(TfoName.RELATES_WITH, ONE_PLUS, ONE_PLUS, "Thing", "Thing")),
    RelationshipSchema(
        "is_required_by", "is required by", "Tool", "Method", STAR, ONE_PLUS,
        "A tool is called for by methods.",
        _tfo(TfoName.INTERACTS_WITH_OTHER, ONE_PLUS, ONE_PLUS, _POWER_THING, "Thing"),
        # The prose reading is zero-or-more methods per tool; the cardinality
        # row pins 1..*. Lenient validation follows the prose, strict the row.
        lenient_target_mult=STAR),
    RelationshipSchema(
        "performs", "performs", "Agent", "Task", ONE_PLUS, ONE_PLUS,
        "An agent carries out one or more assigned tasks; a task is carried out by one or more agents.",
        _tfo(TfoName.INTERACTS_WITH_OTHER, ONE_PLUS, ONE_PLUS, _POWER_THING, "Thing")),
    RelationshipSchema(
        "pertains_to_category", "pertains to category",
        "WorkEntity", "WorkEntitySubCategory", ONE_PLUS, ONE,
        "Work entities belong to exactly one work-entity sub-category.",
        _tfo(TfoName.BELONGS_TO, ONE_PLUS, STAR, "Thing", "Thing Category")),
    RelationshipSchema(
        "pertains_to_product_category", "pertains to product category",
        "ProductEntity", "ProductCategory", ONE_PLUS, ONE,
        "Product entities belong to exactly one product category.",
        _tfo(TfoName.BELONGS_TO, ONE_PLUS, STAR, "Thing", "Thing Category")),
    RelationshipSchema(
        "pertains_to_resource_category", "pertains to resource category",
        "ResourceEntity", "ResourceCategory", ONE_PLUS, ONE,
        "Resource entities belong to exactly one resource category.",
        _tfo(TfoName.BELONGS_TO, ONE_PLUS, STAR, "Thing", "Thing Category")),
    RelationshipSchema(
        "produces", "produces", "WorkEntity", "WorkProduct", ONE_PLUS, ONE_PLUS,
        "A work entity yields (creates or modifies) one or more work products.",
        _tfo(TfoName.INTERACTS_WITH_OTHER, ONE_PLUS, ONE_PLUS, _POWER_THING, "Thing")),
    RelationshipSchema(
        "relates", "relates", "ProcessPerspective", "ProcessPerspective", STAR, STAR,
        "A process perspective may reference other perspectives.",
        _tfo(TfoName.RELATES_WITH, STAR, STAR, _AOP_TERM, _AOP_TERM)),
    RelationshipSchema(
        "sets_postcondition", "sets postcondition", "WorkEntity", "Condition", ONE_PLUS, STAR,
        "Conditions that must hold for the work entity to count as finished.",
        _tfo(TfoName.DEFINES, STAR, STAR, "Thing", "Assertion")),
    RelationshipSchema(
        "sets_precondition", "sets precondition", "WorkEntity", "Condition", ONE_PLUS, STAR,
        "Conditions that must hold before the work entity starts.",
        _tfo(TfoName.DEFINES, STAR, STAR, "Thing", "Assertion")),
    RelationshipSchema(
        "uses", "uses", "Agent", "WorkResource", ONE_PLUS, ONE_PLUS,
        "An agent employs one or more work resources to carry out a task.",
        _tfo(TfoName.INTERACTS_WITH_OTHER, ONE_PLUS, ONE_PLUS, _POWER_THING, "Thing")),
)

# Default generalization-set labels. The diagram placing these labels is not
# machine-readable, so they are configurable via a partition override file;
# these defaults follow the term notes (work entities split exhaustively,
# resource kinds are an open list).
_DEFAULT_PARTITION_FLAGS: dict[str, tuple[bool, bool]] = {
    "WorkEntity": (True, True),
    "ProductEntity": (True, True),
    "Agent": (True, True),
    "WorkResource": (True, False),
    "WorkProduct": (True, False),
}


@dataclass(frozen=True)
class OntologySchema:
    """The complete, immutable built-in schema with lookup indexes."""

    terms: tuple[TermKind, ...]
    attributes: tuple[AttributeSchema, ...]
    relationships: tuple[RelationshipSchema, ...]
    partitions: tuple[Partition, ...]
    axiom_ids: tuple[str, ...]
    _term_index: MappingProxyType = field(init=False, repr=False, compare=False)
    _rel_index: MappingProxyType = field(init=False, repr=False, compare=False)
    _children: MappingProxyType = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_term_index",
                           MappingProxyType({t.name: t for t in self.terms}))
        object.__setattr__(self, "_rel_index",
                           MappingProxyType({r.name: r for r in self.relationships}))
        children: dict[str, list[str]] = {t.name: [] for t in self.terms}
        for t in self.terms:
            if t.parent is not None:
                children[t.parent].append(t.name)
        object.__setattr__(self, "_children",
                           MappingProxyType({k: tuple(sorted(v)) for k, v in children.items()}))

    # -- term lookups -------------------------------------------------

    def term(self, name: str) -> TermKind:
        try:
            return self._term_index[name]
        except KeyError:
            raise InvalidTermError(
                f"unknown term kind '{name}'; valid kinds: "
                + ", ".join(sorted(self._term_index))) from None

    def has_term(self, name: str) -> bool:
        return name in self._term_index

    def ancestors(self, name: str) -> tuple[str, ...]:
        """Proper ancestors of a term, nearest parent last-to-root order reversed
        so the root comes first."""
        chain: list[str] = []
        cur = self.term(name).parent
        while cur is not None:
            chain.append(cur)
            cur = self.term(cur).parent
        chain.reverse()
        return tuple(chain)

    def children_of(self, name: str) -> tuple[str, ...]:
        self.term(name)
        return self._children[name]

    def is_subkind(self, kind: str, ancestor: str) -> bool:
        """True iff ``kind`` equals ``ancestor`` or descends from it."""
        self.term(ancestor)
        cur: str | None = self.term(kind).name
        while cur is not None:
            if cur == ancestor:
                return True
            cur = self.term(cur).parent
        return False

    def attributes_for(self, kind: str) -> tuple[AttributeSchema, ...]:
        """Own plus inherited attributes, root-most owner first,
        declaration order within each owner."""
        owners = self.ancestors(kind) + (self.term(kind).name,)
        return tuple(a for owner in owners for a in self.attributes if a.owner == owner)

    def attribute_schema(self, kind: str, attr_name: str) -> AttributeSchema | None:
        for a in self.attributes_for(kind):
            if a.name == attr_name:
                return a
        return None

    # -- relationship lookups -----------------------------------------

    def relationship_schema(self, name: str) -> RelationshipSchema:
        key = name.replace(" ", "_")
        try:
            return self._rel_index[key]
        except KeyError:
            raise InvalidRelationshipError(
                f"unknown relationship '{name}'; valid names: "
                + ", ".join(sorted(self._rel_index))) from None

    def has_relationship(self, name: str) -> bool:
        return name.replace(" ", "_") in self._rel_index

    def partition_for(self, parent: str) -> Partition | None:
        for p in self.partitions:
            if p.parent == parent:
                return p
        return None


def _build_partitions(terms: tuple[TermKind, ...],
                      flags: dict[str, tuple[bool, bool]]) -> tuple[Partition, ...]:
    children: dict[str, list[str]] = {}
    for t in terms:
        if t.parent is not None:
            children.setdefault(t.parent, []).append(t.name)
    parts = []
    for parent in sorted(flags):
        disjoint, complete = flags[parent]
        kids = tuple(sorted(children.get(parent, ())))
        if not kids:
            raise PartitionConfigError(f"term '{parent}' has no taxonomic children")
        parts.append(Partition(parent, kids, disjoint, complete))
    return tuple(parts)


def _self_check(schema: OntologySchema) -> None:
    if len(schema.terms) != 30:
        raise RuntimeError(f"schema self-check: expected 30 terms, found {len(schema.terms)}")
    if len(schema.attributes) != 30:
        raise RuntimeError(f"schema self-check: expected 30 attributes, found {len(schema.attributes)}")
    if len(schema.relationships) != 18:
        raise RuntimeError(
            f"schema self-check: expected 18 relationships, found {len(schema.relationships)}")
    if len(schema.axiom_ids) != 6:
        raise RuntimeError("schema self-check: expected 6 axiom ids")
    names = [t.name for t in schema.terms]
    if len(set(names)) != len(names):
        raise RuntimeError("schema self-check: duplicate term names")
    for t in schema.terms:
        if t.parent is not None and not schema.has_term(t.parent):
            raise RuntimeError(f"schema self-check: {t.name} has unknown parent {t.parent}")
        # Forest acyclicity: every chain must reach a root within 5 steps.
        cur, steps = t.parent, 0
        while cur is not None:
            steps += 1
            if steps > 5:
                raise RuntimeError(f"schema self-check: taxonomy chain too deep at {t.name}")
            cur = schema.term(cur).parent
    seen_attrs = set()
    for a in schema.attributes:
        if not schema.has_term(a.owner):
            raise RuntimeError(f"schema self-check: attribute {a.name} has unknown owner {a.owner}")
        if (a.owner, a.name) in seen_attrs:
            raise RuntimeError(f"schema self-check: duplicate attribute {a.owner}.{a.name}")
        seen_attrs.add((a.owner, a.name))
    rel_names = [r.name for r in schema.relationships]
    if len(set(rel_names)) != len(rel_names):
        raise RuntimeError("schema self-check: duplicate relationship names")
    for r in schema.relationships:
        if not schema.has_term(r.source_kind) or not schema.has_term(r.target_kind):
            raise RuntimeError(f"schema self-check: relationship {r.name} has unknown end kind")
    for p in schema.partitions:
        direct = set(schema.children_of(p.parent))
        if not p.children or not set(p.children) <= direct:
            raise RuntimeError(f"schema self-check: partition {p.parent} children mismatch")


_SCHEMA: OntologySchema | None = None


def builtin_schema() -> OntologySchema:
    """The complete built-in schema (cached; structurally identical on every call)."""
    global _SCHEMA
    if _SCHEMA is None:
        schema = OntologySchema(
            terms=_TERMS,
            attributes=_ATTRIBUTES,
            relationships=_RELATIONSHIPS,
            partitions=_build_partitions(_TERMS, _DEFAULT_PARTITION_FLAGS),
            axiom_ids=AXIOM_IDS,
        )
        _self_check(schema)
        _SCHEMA = schema
    return _SCHEMA


def is_subkind(kind: str, ancestor: str) -> bool:
    return builtin_schema().is_subkind(kind, ancestor)


def attributes_for(kind: str) -> tuple[AttributeSchema, ...]:
    return builtin_schema().attributes_for(kind)


def relationship_schema(name: str) -> RelationshipSchema:
    return builtin_schema().relationship_schema(name)


# -- partition overrides ----------------------------------------------

_CONFIG_LINE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+?)\s*$")


def parse_partition_config(text: str) -> dict[str, tuple[bool, bool]]:
    """Parse a partition override file.

    One assignment per line: ``Parent = disjoint|overlapping complete|incomplete``
    (the two labels in either order). ``#`` starts a comment.
    """
    overrides: dict[str, tuple[bool, bool]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _CONFIG_LINE.match(line)
        if not m:
            raise PartitionConfigError(f"line {lineno}: expected 'Parent = <labels>'")
        parent, labels = m.group(1), m.group(2).split()
        disjoint: bool | None = None
        complete: bool | None = None
        for label in labels:
            if label in ("disjoint", "overlapping"):
                disjoint = label == "disjoint"
            elif label in ("complete", "incomplete"):
                complete = label == "complete"
            else:
                raise PartitionConfigError(f"line {lineno}: unknown label '{label}'")
        if disjoint is None or complete is None:
            raise PartitionConfigError(
                f"line {lineno}: need one of disjoint/overlapping and one of complete/incomplete")
        if parent in overrides:
            raise PartitionConfigError(f"line {lineno}: duplicate entry for '{parent}'")
        overrides[parent] = (disjoint, complete)
    return overrides


def effective_partitions(schema: OntologySchema,
                         overrides: dict[str, tuple[bool, bool]] | None = None,
                         ) -> tuple[Partition, ...]:
    """Built-in partitions with overrides applied.

    An override may retag a default partition or introduce one for any term
    that has taxonomic children.
    """
    if not overrides:
        return schema.partitions
    flags = dict(_DEFAULT_PARTITION_FLAGS)
    for parent, value in overrides.items():
        if not schema.has_term(parent):
            raise PartitionConfigError(f"unknown term '{parent}' in partition config")
        if not schema.children_of(parent):
            raise PartitionConfigError(f"term '{parent}' has no taxonomic children")
        flags[parent] = value
    return _build_partitions(schema.terms, flags)


# -- schema dumps -----------------------------------------------------

def render_schema_text(schema: OntologySchema,
                       partitions: tuple[Partition, ...] | None = None) -> str:
    """Human-readable dump of the full schema tables."""
    parts = partitions if partitions is not None else schema.partitions
    own_counts = len(schema.attributes)
    lines = [
        "ProcessCO v1.3 built-in schema",
        f"terms: {len(schema.terms)}  attributes: {own_counts}  "
        f"relationships: {len(schema.relationships)}  axioms: {len(schema.axiom_ids)}",
        "",
        "TERMS",
    ]
    for t in sorted(schema.terms, key=lambda t: t.name):
        parent = f" < {t.parent}" if t.parent else ""
        syn = f" (syn: {', '.join(t.synonyms)})" if t.synonyms else ""
        lines.append(f"  {t.name}{parent} [{t.stereotype_detail}]{syn}")
        lines.append(f"      {t.definition}")
        for note in t.notes:
            lines.append(f"      note: {note}")
    lines.append("")
    lines.append("ATTRIBUTES")
    for t in sorted(schema.terms, key=lambda t: t.name):
        for a in schema.attributes:
            if a.owner == t.name:
                lines.append(f"  {a.owner}.{a.name}: {a.value_type.value}")
                lines.append(f"      {a.definition}")
    lines.append("")
    lines.append("RELATIONSHIPS")
    for r in sorted(schema.relationships, key=lambda r: r.name):
        lines.append(f"  {r.name}: {r.source_kind}[{r.source_mult}] -> "
                     f"{r.target_kind}[{r.target_mult}]  (refines {r.tfo_parent.name.value})")
        lines.append(f"      {r.definition}")
    lines.append("")
    lines.append("PARTITIONS")
    for p in parts:
        d = "disjoint" if p.disjoint else "overlapping"
        c = "complete" if p.complete else "incomplete"
        lines.append(f"  {p.parent}: {d}, {c} {{{', '.join(p.children)}}}")
    lines.append("")
    lines.append("AXIOMS")
    for aid in schema.axiom_ids:
        container, rel, target = AXIOM_SIGNATURES[aid]
        lines.append(f"  {aid}: every '{rel}' edge from a {container} to a {target} "
                     "is mirrored by some direct part")
    return "\n".join(lines) + "\n"


def render_schema_canonical(schema: OntologySchema,
                            partitions: tuple[Partition, ...] | None = None) -> str:
    """Stable tab-delimited dump of the schema for golden-file comparison."""
    parts = partitions if partitions is not None else schema.partitions
    rows = [
        "procco-schema\tv1",
        f"count\tterms\t{len(schema.terms)}",
        f"count\tattributes\t{len(schema.attributes)}",
        f"count\trelationships\t{len(schema.relationships)}",
        f"count\taxioms\t{len(schema.axiom_ids)}",
    ]
    for t in sorted(schema.terms, key=lambda t: t.name):
        rows.append(f"term\t{t.name}\t{t.parent or '-'}\t{t.tfo_stereotype.value}")
    for t in sorted(schema.terms, key=lambda t: t.name):
        for a in schema.attributes:
            if a.owner == t.name:
                rows.append(f"attribute\t{a.owner}\t{a.name}\t{a.value_type.value}")
    for r in sorted(schema.relationships, key=lambda r: r.name):
        rows.append(f"relationship\t{r.name}\t{r.source_kind}\t{r.source_mult}\t"
                    f"{r.target_kind}\t{r.target_mult}\t{r.tfo_parent.name.value}")
    for p in parts:
        d = "disjoint" if p.disjoint else "overlapping"
        c = "complete" if p.complete else "incomplete"
        rows.append(f"partition\t{p.parent}\t{d}\t{c}\t{','.join(p.children)}")
    for aid in schema.axiom_ids:
        container, rel, target = AXIOM_SIGNATURES[aid]
        rows.append(f"axiom\t{aid}\t{container}\t{rel}\t{target}")
    return "\n".join(rows) + "\n"
