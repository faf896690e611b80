"""The relationship refinement matrix and instance lifting.

Each of the 18 built-in relationships refines one of five foundational
relationships. The matrix pairs every relationship with its parent and
both cardinality profiles; :func:`check_schema_refinement` classifies each
row's cardinalities against the parent's (equal, narrowing, widening) and
reports widenings, and :func:`lift` maps a graph's relation edges up to
foundational-level edges.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import InstanceGraph
from .schema import (
    Multiplicity,
    RelationshipSchema,
    ThingFORelation,
    builtin_schema,
)
from .validator import Finding

# End-term labels as the matrix prints them, where they differ from the
# term's own display name (the resource-category row labels its target
# 'Resource Entity Category').
_PRINTED_TERM_OVERRIDES: dict[tuple[str, str], str] = {
    ("pertains_to_resource_category", "target"): "Resource Entity Category",
}


@dataclass(frozen=True)
class RefinementRow:
    """One matrix row: a relationship, its foundational parent, and the
    end-term labels and cardinalities as printed."""

    pco: RelationshipSchema
    tfo: ThingFORelation
    pco_source_card: Multiplicity
    pco_target_card: Multiplicity
    pco_source_term: str
    pco_target_term: str


_MATRIX: tuple[RefinementRow, ...] | None = None


def builtin_matrix() -> tuple[RefinementRow, ...]:
    """All 18 rows in table order (alphabetical by relationship label)."""
    global _MATRIX
    if _MATRIX is None:
        schema = builtin_schema()
        rows = []
        for rel in sorted(schema.relationships, key=lambda r: r.display_name):
            source_term = _PRINTED_TERM_OVERRIDES.get(
                (rel.name, "source"), schema.term(rel.source_kind).display_name)
            target_term = _PRINTED_TERM_OVERRIDES.get(
                (rel.name, "target"), schema.term(rel.target_kind).display_name)
            rows.append(RefinementRow(
                pco=rel,
                tfo=rel.tfo_parent,
                pco_source_card=rel.source_mult,
                pco_target_card=rel.target_mult,
                pco_source_term=source_term,
                pco_target_term=target_term,
            ))
        _MATRIX = tuple(rows)
    return _MATRIX


def matrix_row(name: str) -> RefinementRow:
    """Look up a row by relationship name (spaces and underscores both work)."""
    key = builtin_schema().relationship_schema(name).name
    for row in builtin_matrix():
        if row.pco.name == key:
            return row
    raise AssertionError(f"matrix row missing for '{key}'")  # self-check guards this


def classify_cards(child: Multiplicity, parent: Multiplicity) -> str:
    """How a refining cardinality relates to its parent interval."""
    if child == parent:
        return "equal"
    if child.within(parent):
        return "narrowing"
    return "widening"


def check_schema_refinement() -> list[Finding]:
    """Compare every row's cardinalities to its foundational parent's.

    Narrowing is the normal direction of refinement and is silent; a
    widening (the refining end permits counts the parent forbids) is
    reported as an informational warning (R001). Operates on built-in data
    only and is independent of any instance graph.
    """
    findings: list[Finding] = []
    for row in builtin_matrix():
        for end, child, parent in (
                ("source", row.pco_source_card, row.tfo.source_card),
                ("target", row.pco_target_card, row.tfo.target_card)):
            if classify_cards(child, parent) == "widening":
                findings.append(Finding(
                    "R001", "warning", (),
                    f"'{row.pco.name}' {end} cardinality {child} widens its "
                    f"parent '{row.tfo.name.value}' cardinality {parent}"))
    findings.sort(key=Finding.sort_key)
    return findings


def lift(graph: InstanceGraph) -> list[tuple[str, str, str]]:
    """Map every relation edge to its foundational-level edge.

    Lifting is total and edge-preserving: the result has exactly one
    ``(parent relation name, source, target)`` triple per relation edge,
    in deterministic order. Composition edges are hierarchy-internal and
    are not lifted.
    """
    schema = builtin_schema()
    lifted = [
        (schema.relationship_schema(edge.rel).tfo_parent.name.value, edge.source, edge.target)
        for edge in graph.relations
    ]
    lifted.sort()
    return lifted


# -- matrix rendering ---------------------------------------------------

_COLUMNS = ("card", "Term 1", "relationship name", "card", "Term 2",
            "card", "Term 1", "relationship name", "card", "Term 2")


def _row_cells(row: RefinementRow) -> tuple[str, ...]:
    return (
        str(row.pco_source_card), row.pco_source_term, row.pco.display_name,
        str(row.pco_target_card), row.pco_target_term,
        str(row.tfo.source_card), row.tfo.source_term,
        row.tfo.name.value.replace("_", " "),
        str(row.tfo.target_card), row.tfo.target_term,
    )


def render_matrix_text(rows: tuple[RefinementRow, ...] | None = None) -> str:
    """Aligned-column rendering of the matrix in its printed column order."""
    rows = rows if rows is not None else builtin_matrix()
    table = [_COLUMNS] + [_row_cells(r) for r in rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(_COLUMNS))]
    out = []
    for line in table:
        out.append("  ".join(cell.ljust(width) for cell, width in zip(line, widths)).rstrip())
    return "\n".join(out) + "\n"


def render_matrix_canonical(rows: tuple[RefinementRow, ...] | None = None) -> str:
    """Stable tab-delimited matrix for golden-file comparison."""
    rows = rows if rows is not None else builtin_matrix()
    lines = ["procco-matrix\tv1"]
    for r in rows:
        lines.append("\t".join(_row_cells(r)))
    return "\n".join(lines) + "\n"
