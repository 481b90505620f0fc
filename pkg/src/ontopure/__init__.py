"""Ontology store, version diff/purification engine, and domain-scoped search."""

from .diff import (
    Mismatch,
    MismatchKind,
    MismatchReport,
    PatchOp,
    PatchOpKind,
    PurifyResult,
    VersionRelation,
    apply_patch,
    apply_patch_log,
    compare_versions,
    find_mismatches,
    mismatching_index,
    purify,
)
from .model import (
    DeletePolicy,
    NodeId,
    Ontology,
    OntologyNode,
    VersionHeader,
    Violation,
)
from .owlio import parse_json, parse_owl, serialize_json, serialize_owl
from .search import Query, SearchOutcome, SearchResult, match_node, search, tokenize

__version__ = "0.1.0"

__all__ = [
    "DeletePolicy",
    "Mismatch",
    "MismatchKind",
    "MismatchReport",
    "NodeId",
    "Ontology",
    "OntologyNode",
    "PatchOp",
    "PatchOpKind",
    "PurifyResult",
    "Query",
    "SearchOutcome",
    "SearchResult",
    "VersionHeader",
    "VersionRelation",
    "Violation",
    "apply_patch",
    "apply_patch_log",
    "compare_versions",
    "find_mismatches",
    "match_node",
    "mismatching_index",
    "parse_json",
    "parse_owl",
    "purify",
    "search",
    "serialize_json",
    "serialize_owl",
    "tokenize",
]
