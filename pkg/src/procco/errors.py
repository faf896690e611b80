"""Exception types raised by the procco library.

All library errors derive from :class:`ProccoError` so callers can catch
one base class. The CLI maps uncaught library errors to usage failures;
model *problems* are never exceptions, they are findings or diagnostics.
"""

from __future__ import annotations


class ProccoError(Exception):
    """Base class for all procco errors."""


class InvalidTermError(ProccoError):
    """A term name is not one of the 30 built-in term kinds."""


class InvalidRelationshipError(ProccoError):
    """A relationship name is not one of the 18 built-in relationships."""


class DuplicateEntityError(ProccoError):
    """An entity id is already present in the graph."""


class MissingEntityError(ProccoError):
    """An edge endpoint or query subject does not resolve to an entity."""


class InvalidCompositionError(ProccoError):
    """The endpoint kinds admit no legal composition flavor."""


class CompositionCycleError(ProccoError):
    """Adding the composition edge would create a cycle."""


class FrozenGraphError(ProccoError):
    """Mutation was attempted on a frozen graph."""


class WrongKindError(ProccoError):
    """A query subject has a kind the operation does not accept."""


class AxiomArityError(ProccoError):
    """The subject list does not match the axiom's universal variables."""


class CanonicalParseError(ProccoError):
    """Canonical graph text is malformed.

    Carries the 1-based line number of the offending record.
    """

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class PartitionConfigError(ProccoError):
    """A partition override file is malformed."""
