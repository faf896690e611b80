"""procco: validation engine for process-model instance graphs.

Checks concrete models against the built-in ProcessCO v1.3 ontology:
taxonomy and attribute conformance, the 18 cardinality-constrained
relationships, generalization-set labels, composition well-formedness,
the six structural axioms, and the refinement matrix down to the
foundational ontology.
"""

from .dsl import Diagnostic, SourceDocument, format_graph, parse, parse_bytes
from .errors import (
    AxiomArityError,
    CanonicalParseError,
    CompositionCycleError,
    DuplicateEntityError,
    FrozenGraphError,
    InvalidCompositionError,
    InvalidRelationshipError,
    InvalidTermError,
    MissingEntityError,
    PartitionConfigError,
    ProccoError,
    WrongKindError,
)
from .graph import (
    CompositionEdge,
    EntityRecord,
    InstanceGraph,
    RelationEdge,
    Scalar,
    export_canonical,
    import_canonical,
)
from .query import WitnessResult, axiom_witness, closure, descendants
from .refinement import (
    RefinementRow,
    builtin_matrix,
    check_schema_refinement,
    lift,
    matrix_row,
)
from .schema import (
    AttributeSchema,
    Multiplicity,
    OntologySchema,
    Partition,
    RelationshipSchema,
    TermKind,
    ThingFORelation,
    attributes_for,
    builtin_schema,
    is_subkind,
    relationship_schema,
)
from .validator import (
    AxiomId,
    Finding,
    Mode,
    ValidationReport,
    check_axiom,
    check_composition,
    check_multiplicities,
    check_partitions,
    check_types,
    naive_axiom_oracle,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "AttributeSchema",
    "AxiomArityError",
    "AxiomId",
    "CanonicalParseError",
    "CompositionCycleError",
    "CompositionEdge",
    "Diagnostic",
    "DuplicateEntityError",
    "EntityRecord",
    "Finding",
    "FrozenGraphError",
    "InstanceGraph",
    "InvalidCompositionError",
    "InvalidRelationshipError",
    "InvalidTermError",
    "MissingEntityError",
    "Mode",
    "Multiplicity",
    "OntologySchema",
    "Partition",
    "PartitionConfigError",
    "ProccoError",
    "RefinementRow",
    "RelationEdge",
    "RelationshipSchema",
    "Scalar",
    "SourceDocument",
    "TermKind",
    "ThingFORelation",
    "ValidationReport",
    "WitnessResult",
    "WrongKindError",
    "attributes_for",
    "axiom_witness",
    "builtin_matrix",
    "builtin_schema",
    "check_axiom",
    "check_composition",
    "check_multiplicities",
    "check_partitions",
    "check_schema_refinement",
    "check_types",
    "closure",
    "descendants",
    "export_canonical",
    "format_graph",
    "import_canonical",
    "is_subkind",
    "lift",
    "matrix_row",
    "naive_axiom_oracle",
    "parse",
    "parse_bytes",
    "relationship_schema",
    "validate",
]
