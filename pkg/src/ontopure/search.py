"""Domain-scoped keyword search over an ontology snapshot.

Scoring is deliberately plain: a query token that exactly equals a label
or synonym token scores 1, a remaining token that prefixes one scores
0.5. When the local copy has no hit but the reference does, the search
reports that the local ontology is mismatched instead of answering.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .diff import MismatchReport, find_mismatches
from .errors import DomainMismatch, EmptyQuery
from .model import NodeId, Ontology, OntologyNode

_SPLIT = re.compile(r"[^0-9a-z]+")

HITS = "hits"
NO_MATCH = "noMatch"
NEEDS_PURIFICATION = "needsPurification"


def _split(text: str) -> list[str]:
    return [t for t in _SPLIT.split(text.lower()) if t]


def tokenize(raw: str) -> list[str]:
    """Lowercase tokens split on non-alphanumerics, in input order."""
    tokens = _split(raw)
    if not tokens:
        raise EmptyQuery(f"no tokens survive in {raw!r}")
    return tokens


@dataclass
class Query:
    raw: str
    domain: str
    tokens: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.tokens:
            self.tokens = tokenize(self.raw)


def match_node(node: OntologyNode, tokens: list[str]) -> float:
    """Exact token hits count 1, prefix hits 0.5; 0 means no match."""
    node_tokens: set[str] = set(_split(node.label))
    for synonym in node.synonyms:
        node_tokens.update(_split(synonym))
    score = 0.0
    for token in tokens:
        if token in node_tokens:
            score += 1.0
        elif any(candidate.startswith(token) for candidate in node_tokens):
            score += 0.5
    return score


@dataclass
class SearchResult:
    id: NodeId
    path: list[str]
    score: float
    links: list[NodeId]

    def to_json(self) -> dict:
        return {"id": self.id, "path": self.path, "score": self.score, "links": self.links}

    @classmethod
    def from_json(cls, data: dict) -> "SearchResult":
        return cls(data["id"], list(data["path"]), data["score"], list(data["links"]))


@dataclass
class SearchOutcome:
    """Hits, no match, or a mismatch signal carrying the diff report."""

    outcome: str
    results: list[SearchResult] = field(default_factory=list)
    report: MismatchReport | None = None

    @classmethod
    def hits(cls, results: list[SearchResult]) -> "SearchOutcome":
        if not results:
            raise ValueError("hits outcome requires at least one result")
        return cls(HITS, results)

    @classmethod
    def no_match(cls) -> "SearchOutcome":
        return cls(NO_MATCH)

    @classmethod
    def needs_purification(cls, report: MismatchReport) -> "SearchOutcome":
        return cls(NEEDS_PURIFICATION, report=report)

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome,
            "results": [r.to_json() for r in self.results],
            "report": self.report.to_json() if self.report else None,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SearchOutcome":
        return cls(
            data["outcome"],
            [SearchResult.from_json(r) for r in data["results"]],
            MismatchReport.from_json(data["report"]) if data.get("report") else None,
        )


def _score_all(ontology: Ontology, tokens: list[str]) -> list[tuple[float, NodeId]]:
    scored = []
    for nid, node in ontology.nodes.items():
        score = match_node(node, tokens)
        if score > 0:
            scored.append((score, nid))
    return scored


def search(
    local: Ontology, reference: Ontology | None, query: Query
) -> SearchOutcome:
    """Score every node; fall back to the reference to detect staleness.

    Hits are ordered by score descending, then id ascending. When nothing
    matches locally but the reference would answer, the result is a
    purification signal carrying the full mismatch report.
    """
    if query.domain != local.domain:
        raise DomainMismatch(
            f"query names domain {query.domain!r}; this ontology serves {local.domain!r}"
        )
    scored = _score_all(local, query.tokens)
    if scored:
        scored.sort(key=lambda pair: (-pair[0], pair[1]))
        results = [
            SearchResult(
                nid,
                local.path_labels(nid),
                score,
                list(local.nodes[nid].children),
            )
            for score, nid in scored
        ]
        return SearchOutcome.hits(results)
    if reference is not None and _score_all(reference, query.tokens):
        return SearchOutcome.needs_purification(find_mismatches(local, reference))
    return SearchOutcome.no_match()
