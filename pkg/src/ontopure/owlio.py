"""Reader and writer for the OWL/XML subset plus the canonical JSON form.

The XML side uses expat for lexing and layers a strict, closed grammar on
top: exactly the header vocabulary (versionInfo, backwardCompatibleWith,
incompatibleWith, priorVersion, a domain extension element) and Class
declarations with label, subClassOf, synonyms and string properties.
Anything else is rejected — the subset stays honest instead of silently
skipping semantics it does not implement. Every error names its location
(line/column for XML, a JSON pointer for JSON).

Serialization is deterministic: classes ascend by id, attribute and key
order is fixed, sets are sorted. Child order inside a parent is not part
of either wire format (parent links carry the shape), so canonical
equality of two ontologies is equality of their serialized JSON.
"""

from __future__ import annotations

import json
import re
from xml.parsers import expat
from xml.sax.saxutils import escape, quoteattr

from .errors import (
    DanglingSubclass,
    DuplicateId,
    JsonSyntax,
    MalformedDocument,
    MissingVersion,
    MultipleRoots,
    UnknownElement,
    XmlSyntax,
)
from .model import NodeId, Ontology, OntologyNode, VersionHeader

_XMLNS = {
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "owl": "http://www.w3.org/2002/07/owl#",
    "dom": "urn:ontopure:domain#",
}

_ID_RE = re.compile(r"^n([1-9][0-9]*)$")
_RESOURCE_RE = re.compile(r"^#n([1-9][0-9]*)$")

_HEADER_LEAVES = frozenset(
    {
        "owl:versionInfo",
        "owl:backwardCompatibleWith",
        "owl:incompatibleWith",
        "owl:priorVersion",
        "dom:domain",
    }
)
_CLASS_LEAVES = frozenset(
    {"rdfs:label", "rdfs:subClassOf", "dom:synonym", "dom:property"}
)


class _ClassAcc:
    """Accumulates one owl:Class while the reader walks the document."""

    __slots__ = ("id", "label", "parent", "synonyms", "properties", "loc")

    def __init__(self, node_id: NodeId, loc: str):
        self.id = node_id
        self.label: str | None = None
        self.parent: NodeId | None = None
        self.synonyms: list[str] = []
        self.properties: dict[str, str] = {}
        self.loc = loc


class _OwlReader:
    def __init__(self) -> None:
        self.parser = expat.ParserCreate()
        self.parser.StartElementHandler = self._start
        self.parser.EndElementHandler = self._end
        self.parser.CharacterDataHandler = self._chars
        self.stack: list[str] = []
        self.text: list[str] = []
        self.header_seen = False
        self.version: str | None = None
        self.backward: list[str] = []
        self.incompatible: list[str] = []
        self.prior: str | None = None
        self.domain: str | None = None
        self.classes: list[_ClassAcc] = []
        self.current: _ClassAcc | None = None
        self.pending_key: str | None = None  # dom:property key attribute

    def loc(self) -> str:
        return f"line {self.parser.CurrentLineNumber}, column {self.parser.CurrentColumnNumber}"

    def fail_unknown(self, name: str) -> None:
        raise UnknownElement(f"element <{name}> is not part of the subset", self.loc())

    def _require_no_attrs(self, name: str, attrs: dict) -> None:
        if attrs:
            raise MalformedDocument(
                f"<{name}> takes no attributes; got {sorted(attrs)}", self.loc()
            )

    def _start(self, name: str, attrs: dict) -> None:
        self._flush_structural_text()
        depth = len(self.stack)
        if depth == 0:
            if name != "rdf:RDF":
                self.fail_unknown(name)
            for key in attrs:
                if not key.startswith("xmlns"):
                    raise MalformedDocument(
                        f"<rdf:RDF> accepts only xmlns attributes; got {key!r}",
                        self.loc(),
                    )
        elif depth == 1:
            if name == "owl:Ontology":
                if self.header_seen:
                    raise MalformedDocument(
                        "more than one <owl:Ontology> header", self.loc()
                    )
                self.header_seen = True
                self._require_no_attrs(name, attrs)
            elif name == "owl:Class":
                raw = attrs.pop("rdf:ID", None)
                self._require_no_attrs(name, attrs)
                if raw is None:
                    raise MalformedDocument(
                        "<owl:Class> requires an rdf:ID attribute", self.loc()
                    )
                match = _ID_RE.match(raw)
                if match is None:
                    raise MalformedDocument(
                        f"rdf:ID must look like n<positive int>; got {raw!r}",
                        self.loc(),
                    )
                self.current = _ClassAcc(int(match.group(1)), self.loc())
            else:
                self.fail_unknown(name)
        elif depth == 2 and self.stack[1] == "owl:Ontology":
            if name not in _HEADER_LEAVES:
                self.fail_unknown(name)
            self._require_no_attrs(name, attrs)
        elif depth == 2 and self.stack[1] == "owl:Class":
            if name not in _CLASS_LEAVES:
                self.fail_unknown(name)
            if name == "rdfs:subClassOf":
                raw = attrs.pop("rdf:resource", None)
                self._require_no_attrs(name, attrs)
                if raw is None:
                    raise MalformedDocument(
                        "<rdfs:subClassOf> requires rdf:resource", self.loc()
                    )
                match = _RESOURCE_RE.match(raw)
                if match is None:
                    raise MalformedDocument(
                        f"rdf:resource must look like #n<positive int>; got {raw!r}",
                        self.loc(),
                    )
                if self.current.parent is not None:
                    raise MalformedDocument(
                        "a class may declare at most one subClassOf", self.loc()
                    )
                self.current.parent = int(match.group(1))
            elif name == "dom:property":
                key = attrs.pop("key", None)
                self._require_no_attrs(name, attrs)
                if not key:
                    raise MalformedDocument(
                        "<dom:property> requires a non-empty key attribute", self.loc()
                    )
                self.pending_key = key
            else:
                self._require_no_attrs(name, attrs)
        else:
            self.fail_unknown(name)
        self.stack.append(name)
        self.text = []

    def _chars(self, data: str) -> None:
        self.text.append(data)

    def _flush_structural_text(self) -> None:
        if self.text and "".join(self.text).strip():
            raise MalformedDocument(
                f"unexpected text inside <{self.stack[-1]}>", self.loc()
            )
        self.text = []

    def _end(self, name: str) -> None:
        content = "".join(self.text).strip()
        self.text = []
        self.stack.pop()
        if name in ("rdf:RDF", "owl:Ontology", "owl:Class"):
            if content:
                raise MalformedDocument(f"unexpected text inside <{name}>", self.loc())
            if name == "owl:Class":
                if self.current.label is None:
                    raise MalformedDocument(
                        f"class n{self.current.id} lacks an <rdfs:label>",
                        self.current.loc,
                    )
                self.classes.append(self.current)
                self.current = None
            return
        if name == "rdfs:subClassOf":
            if content:
                raise MalformedDocument(
                    "<rdfs:subClassOf> carries its target in rdf:resource, not text",
                    self.loc(),
                )
            return
        if name == "owl:versionInfo":
            if self.version is not None:
                raise MalformedDocument("more than one <owl:versionInfo>", self.loc())
            if not content:
                raise MissingVersion("<owl:versionInfo> is empty", self.loc())
            self.version = content
        elif name == "owl:backwardCompatibleWith":
            self.backward.append(content)
        elif name == "owl:incompatibleWith":
            self.incompatible.append(content)
        elif name == "owl:priorVersion":
            if self.prior is not None:
                raise MalformedDocument("more than one <owl:priorVersion>", self.loc())
            self.prior = content
        elif name == "dom:domain":
            if self.domain is not None:
                raise MalformedDocument("more than one <dom:domain>", self.loc())
            if not content:
                raise MalformedDocument("<dom:domain> is empty", self.loc())
            self.domain = content
        elif name == "rdfs:label":
            if self.current.label is not None:
                raise MalformedDocument(
                    f"class n{self.current.id} declares two labels", self.loc()
                )
            if not content:
                raise MalformedDocument(
                    f"class n{self.current.id} has an empty label", self.loc()
                )
            self.current.label = content
        elif name == "dom:synonym":
            if not content:
                raise MalformedDocument("<dom:synonym> is empty", self.loc())
            self.current.synonyms.append(content)
        elif name == "dom:property":
            self.current.properties[self.pending_key] = content
            self.pending_key = None


def parse_owl(text: str, *, strict: bool = True) -> Ontology:
    """Parse an OWL subset document into an ontology.

    With ``strict=False`` the reader still rejects syntax, vocabulary and
    duplicate-id errors, but structural breaches (dangling parents,
    multiple roots, cycles) survive into the returned ontology so that
    ``validate`` can report them.
    """
    reader = _OwlReader()
    try:
        reader.parser.Parse(text, True)
    except expat.ExpatError as exc:
        raise XmlSyntax(
            expat.errors.messages[exc.code], exc.lineno, exc.offset + 1
        ) from None
    if not reader.header_seen:
        raise MalformedDocument("document lacks an <owl:Ontology> header", "line 1, column 1")
    if reader.version is None:
        raise MissingVersion("header lacks <owl:versionInfo>", "line 1, column 1")
    if reader.domain is None:
        raise MalformedDocument("header lacks <dom:domain>", "line 1, column 1")
    if not reader.classes:
        raise MalformedDocument("document declares no <owl:Class>", "line 1, column 1")
    header = VersionHeader(
        reader.version, list(reader.backward), list(reader.incompatible), reader.prior
    )
    records = [
        (acc.id, acc.label, acc.parent, acc.synonyms, acc.properties, acc.loc)
        for acc in reader.classes
    ]
    return _assemble(reader.domain, header, records, strict=strict)


def _assemble(
    domain: str,
    header: VersionHeader,
    records: list[tuple],
    *,
    strict: bool,
) -> Ontology:
    """Shared record-to-ontology assembly for both wire formats."""
    header_problems = header.violations()
    if strict and header_problems:
        raise MalformedDocument("; ".join(header_problems), "version header")

    ontology = Ontology(domain, header)
    seen_roots: list[tuple[NodeId, str]] = []
    for node_id, label, parent, synonyms, properties, loc in records:
        if node_id in ontology.nodes:
            raise DuplicateId(f"node id {node_id} declared twice", loc)
        ontology.nodes[node_id] = OntologyNode(
            node_id, label, set(synonyms), parent, [], dict(properties)
        )
        if parent is None:
            seen_roots.append((node_id, loc))
    ontology.next_id = max(ontology.nodes) + 1

    if strict:
        for node_id, label, parent, _, _, loc in records:
            if parent is not None and parent not in ontology.nodes:
                raise DanglingSubclass(
                    f"node {node_id} names missing parent {parent}", loc
                )
        if len(seen_roots) > 1:
            raise MultipleRoots(
                f"classes {sorted(r for r, _ in seen_roots)} all lack a parent",
                seen_roots[1][1],
            )
        if not seen_roots:
            raise MalformedDocument(
                "no root class: every class declares a parent (cycle)", records[0][5]
            )

    # Children pick up document order; canonical output re-sorts by id.
    for node_id, _, parent, _, _, _ in records:
        if parent is not None and parent in ontology.nodes:
            ontology.nodes[parent].children.append(node_id)
    if seen_roots:
        ontology.root = seen_roots[0][0]

    if strict:
        reachable: set[NodeId] = set()
        stack = [ontology.root]
        while stack:
            nid = stack.pop()
            if nid in reachable:
                continue
            reachable.add(nid)
            stack.extend(ontology.nodes[nid].children)
        stranded = sorted(ontology.nodes.keys() - reachable)
        if stranded:
            loc = next(r[5] for r in records if r[0] == stranded[0])
            raise MalformedDocument(
                f"nodes {stranded} are unreachable from the root (cycle)", loc
            )
    return ontology


def serialize_owl(ontology: Ontology) -> str:
    """Deterministic OWL output: classes ascend by id, 2-space indent."""
    if ontology.root is None:
        raise ValueError(
            "an empty ontology has no OWL form (the grammar requires a class)"
        )
    header = ontology.version
    xmlns = " ".join(f'xmlns:{p}={quoteattr(u)}' for p, u in _XMLNS.items())
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<rdf:RDF {xmlns}>",
        "  <owl:Ontology>",
        f"    <owl:versionInfo>{escape(header.version)}</owl:versionInfo>",
    ]
    for version in sorted(header.backward_compatible_with):
        lines.append(
            f"    <owl:backwardCompatibleWith>{escape(version)}</owl:backwardCompatibleWith>"
        )
    for version in sorted(header.incompatible_with):
        lines.append(
            f"    <owl:incompatibleWith>{escape(version)}</owl:incompatibleWith>"
        )
    if header.prior_version is not None:
        lines.append(
            f"    <owl:priorVersion>{escape(header.prior_version)}</owl:priorVersion>"
        )
    lines.append(f"    <dom:domain>{escape(ontology.domain)}</dom:domain>")
    lines.append("  </owl:Ontology>")
    for nid in sorted(ontology.nodes):
        node = ontology.nodes[nid]
        lines.append(f'  <owl:Class rdf:ID="n{nid}">')
        lines.append(f"    <rdfs:label>{escape(node.label)}</rdfs:label>")
        if node.parent is not None:
            lines.append(f'    <rdfs:subClassOf rdf:resource="#n{node.parent}"/>')
        for synonym in sorted(node.synonyms):
            lines.append(f"    <dom:synonym>{escape(synonym)}</dom:synonym>")
        for key in sorted(node.properties):
            lines.append(
                f"    <dom:property key={quoteattr(key)}>{escape(node.properties[key])}</dom:property>"
            )
        lines.append("  </owl:Class>")
    lines.append("</rdf:RDF>")
    return "\n".join(lines) + "\n"


def to_canonical_dict(ontology: Ontology) -> dict:
    """The canonical JSON structure (nodes ascending by id, sorted sets)."""
    header = ontology.version
    return {
        "domain": ontology.domain,
        "version": {
            "version": header.version,
            "backwardCompatibleWith": sorted(header.backward_compatible_with),
            "incompatibleWith": sorted(header.incompatible_with),
            "priorVersion": header.prior_version,
        },
        "nodes": [
            {
                "id": nid,
                "label": node.label,
                "parent": node.parent,
                "synonyms": sorted(node.synonyms),
                "properties": dict(sorted(node.properties.items())),
            }
            for nid, node in sorted(ontology.nodes.items())
        ],
    }


def serialize_json(ontology: Ontology) -> str:
    return json.dumps(to_canonical_dict(ontology), indent=2, ensure_ascii=False) + "\n"


def _expect(condition: bool, message: str, pointer: str) -> None:
    if not condition:
        raise MalformedDocument(message, pointer)


def _reject_duplicate_keys(pairs):
    out: dict = {}
    for key, value in pairs:
        if key in out:
            raise MalformedDocument(f"duplicate object key {key!r}", f"/{key}")
        out[key] = value
    return out


def parse_json(text: str, *, strict: bool = True) -> Ontology:
    """Parse the canonical JSON form; mirrors ``parse_owl``'s error taxonomy."""
    try:
        data = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise JsonSyntax(exc.msg, exc.lineno, exc.colno) from None

    _expect(isinstance(data, dict), "top level must be an object", "/")
    unknown = set(data) - {"domain", "version", "nodes"}
    _expect(not unknown, f"unknown keys {sorted(unknown)}", "/")
    _expect(isinstance(data.get("domain"), str) and data["domain"], "domain must be a non-empty string", "/domain")
    _expect(isinstance(data.get("version"), dict), "version must be an object", "/version")
    _expect(isinstance(data.get("nodes"), list), "nodes must be an array", "/nodes")

    ver = data["version"]
    unknown = set(ver) - {"version", "backwardCompatibleWith", "incompatibleWith", "priorVersion"}
    _expect(not unknown, f"unknown keys {sorted(unknown)}", "/version")
    if not isinstance(ver.get("version"), str) or not ver["version"]:
        raise MissingVersion("version.version must be a non-empty string", "/version/version")
    for key in ("backwardCompatibleWith", "incompatibleWith"):
        values = ver.get(key, [])
        _expect(
            isinstance(values, list) and all(isinstance(v, str) for v in values),
            f"{key} must be an array of strings",
            f"/version/{key}",
        )
    prior = ver.get("priorVersion")
    _expect(prior is None or isinstance(prior, str), "priorVersion must be a string or null", "/version/priorVersion")
    header = VersionHeader(
        ver["version"],
        list(ver.get("backwardCompatibleWith", [])),
        list(ver.get("incompatibleWith", [])),
        prior,
    )

    records = []
    for index, item in enumerate(data["nodes"]):
        pointer = f"/nodes/{index}"
        _expect(isinstance(item, dict), "node must be an object", pointer)
        unknown = set(item) - {"id", "label", "parent", "synonyms", "properties"}
        _expect(not unknown, f"unknown keys {sorted(unknown)}", pointer)
        _expect(
            isinstance(item.get("id"), int) and not isinstance(item["id"], bool) and item["id"] >= 1,
            "id must be a positive integer",
            f"{pointer}/id",
        )
        _expect(
            isinstance(item.get("label"), str) and item["label"],
            "label must be a non-empty string",
            f"{pointer}/label",
        )
        parent = item.get("parent")
        _expect(
            parent is None or (isinstance(parent, int) and not isinstance(parent, bool)),
            "parent must be an integer or null",
            f"{pointer}/parent",
        )
        synonyms = item.get("synonyms", [])
        _expect(
            isinstance(synonyms, list) and all(isinstance(s, str) for s in synonyms),
            "synonyms must be an array of strings",
            f"{pointer}/synonyms",
        )
        properties = item.get("properties", {})
        _expect(
            isinstance(properties, dict)
            and all(isinstance(k, str) and isinstance(v, str) for k, v in properties.items()),
            "properties must map strings to strings",
            f"{pointer}/properties",
        )
        records.append((item["id"], item["label"], parent, synonyms, properties, pointer))

    if not records:
        # An empty ontology round-trips through JSON (OWL cannot express it).
        problems = header.violations()
        if strict and problems:
            raise MalformedDocument("; ".join(problems), "/version")
        return Ontology(data["domain"], header)
    return _assemble(data["domain"], header, records, strict=strict)
