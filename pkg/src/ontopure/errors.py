"""Exception taxonomy shared across the package.

Every error carries a stable ``code`` string (the class name) which the
HTTP service and the CLI embed in machine-readable output.
"""

from __future__ import annotations


class OntologyError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "OntologyError"

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        cls.code = cls.__name__

    def __init__(self, detail: str = ""):
        super().__init__(detail or self.code)
        self.detail = detail or self.code


# --- tree mutations -------------------------------------------------------

class UnknownParent(OntologyError):
    """The requested parent id is not in the ontology."""


class UnknownId(OntologyError):
    """The requested node id is not in the ontology."""


class EmptyLabel(OntologyError):
    """Node labels must be non-empty strings."""


class DuplicateSiblingLabel(OntologyError):
    """A sibling under the same parent already carries this label."""


class CannotDeleteRoot(OntologyError):
    """The root node cannot be deleted."""


class RootAlreadyExists(OntologyError):
    """create_root was called on an ontology that already has a root."""


class InvalidMove(OntologyError):
    """The move would detach the root or create a cycle."""


# --- diff / purification --------------------------------------------------

class IncompatibleVersions(OntologyError):
    """The reference declares the local version incompatible; replace, do not purify."""


class ZeroTotal(OntologyError):
    """The mismatching index M/N is undefined for N = 0."""


class NonConvergence(OntologyError):
    """The purification loop failed to make progress (internal bug signal)."""


class InapplicablePatch(OntologyError):
    """A patch operation's precondition does not hold for this ontology."""


# --- parsing --------------------------------------------------------------

class ParseError(OntologyError):
    """Base for document errors; ``location`` names the offending place."""

    def __init__(self, detail: str, location: str | None = None):
        self.location = location
        if location:
            detail = f"{detail} ({location})"
        super().__init__(detail)


class XmlSyntax(ParseError):
    """Malformed XML; carries the expat line and column."""

    def __init__(self, detail: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(detail, f"line {line}, column {col}")


class JsonSyntax(ParseError):
    """Malformed JSON; carries the decoder's line and column."""

    def __init__(self, detail: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(detail, f"line {line}, column {col}")


class UnknownElement(ParseError):
    """An element outside the accepted vocabulary (the subset stays closed)."""


class DuplicateId(ParseError):
    """The same node id occurs twice."""


class DanglingSubclass(ParseError):
    """A subclass-of target that no class in the document declares."""


class MultipleRoots(ParseError):
    """More than one class without a subclass-of link."""


class MissingVersion(ParseError):
    """The ontology header lacks a version string."""


class MalformedDocument(ParseError):
    """Structural violations outside the named cases (cardinality, field
    types, empty labels, cycles, header invariants)."""


# --- search ---------------------------------------------------------------

class EmptyQuery(OntologyError):
    """No tokens survive tokenization."""


class DomainMismatch(OntologyError):
    """The query names a different domain than the ontology serves."""
