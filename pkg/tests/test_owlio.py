from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genutil import random_pair
from ontopure.errors import (
    DanglingSubclass,
    DuplicateId,
    JsonSyntax,
    MalformedDocument,
    MissingVersion,
    MultipleRoots,
    UnknownElement,
    XmlSyntax,
)
from ontopure.model import Ontology, VersionHeader
from ontopure.owlio import (
    parse_json,
    parse_owl,
    serialize_json,
    serialize_owl,
    to_canonical_dict,
)

MINIMAL = """<?xml version="1.0" encoding="UTF-8"?>
<rdf:RDF xmlns:rdf="x" xmlns:rdfs="x" xmlns:owl="x" xmlns:dom="x">
  <owl:Ontology>
    <owl:versionInfo>1.0</owl:versionInfo>
    <dom:domain>theatre</dom:domain>
  </owl:Ontology>
  <owl:Class rdf:ID="n1">
    <rdfs:label>Theatre</rdfs:label>
  </owl:Class>
</rdf:RDF>
"""


def wrap(classes: str, header_extra: str = "") -> str:
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n<rdf:RDF>\n  <owl:Ontology>\n'
        "    <owl:versionInfo>1.0</owl:versionInfo>\n"
        f"{header_extra}"
        "    <dom:domain>test</dom:domain>\n  </owl:Ontology>\n"
        f"{classes}\n</rdf:RDF>\n"
    )


CLASS_1 = '  <owl:Class rdf:ID="n1">\n    <rdfs:label>Root</rdfs:label>\n  </owl:Class>'


def owl_class(nid: int, label: str, parent: int | None = None) -> str:
    sub = f'\n    <rdfs:subClassOf rdf:resource="#n{parent}"/>' if parent else ""
    return (
        f'  <owl:Class rdf:ID="n{nid}">\n    <rdfs:label>{label}</rdfs:label>{sub}\n  </owl:Class>'
    )


# --- parse_owl ----------------------------------------------------------------

def test_minimal_document():
    ont = parse_owl(MINIMAL)
    assert ont.count_nodes() == 1
    assert ont.nodes[ont.root].label == "Theatre"
    assert ont.domain == "theatre"
    assert ont.version.version == "1.0"
    assert ont.next_id == 2
    assert ont.validate() == []


def test_dangling_subclass():
    doc = wrap(owl_class(1, "Root") + "\n" + owl_class(2, "Child", parent=99))
    with pytest.raises(DanglingSubclass) as info:
        parse_owl(doc)
    assert info.value.location


def test_duplicate_id():
    doc = wrap(owl_class(1, "Root") + "\n" + owl_class(1, "Clone"))
    with pytest.raises(DuplicateId):
        parse_owl(doc)


def test_multiple_roots():
    doc = wrap(owl_class(1, "Root") + "\n" + owl_class(2, "AlsoRoot"))
    with pytest.raises(MultipleRoots):
        parse_owl(doc)


def test_missing_version():
    doc = MINIMAL.replace("    <owl:versionInfo>1.0</owl:versionInfo>\n", "")
    with pytest.raises(MissingVersion):
        parse_owl(doc)


def test_unknown_element_rejected():
    # Vocabulary the subset deliberately does not accept.
    doc = wrap(
        CLASS_1.replace(
            "</owl:Class>",
            '  <owl:disjointWith rdf:resource="#n1"/>\n  </owl:Class>',
        )
    )
    with pytest.raises(UnknownElement) as info:
        parse_owl(doc)
    assert "disjointWith" in str(info.value)


def test_bad_id_format():
    for bad in ("x1", "n0", "n-3", "n1.5"):
        doc = wrap(CLASS_1.replace('rdf:ID="n1"', f'rdf:ID="{bad}"'))
        with pytest.raises(MalformedDocument):
            parse_owl(doc)


def test_empty_label():
    doc = wrap(CLASS_1.replace(">Root<", "><"))
    with pytest.raises(MalformedDocument):
        parse_owl(doc)


def test_missing_label():
    doc = wrap('  <owl:Class rdf:ID="n1">\n  </owl:Class>')
    with pytest.raises(MalformedDocument):
        parse_owl(doc)


def test_cycle_rejected():
    doc = wrap(
        owl_class(1, "Root")
        + "\n"
        + owl_class(2, "A", parent=3)
        + "\n"
        + owl_class(3, "B", parent=2)
    )
    with pytest.raises(MalformedDocument) as info:
        parse_owl(doc)
    assert "unreachable" in str(info.value)


def test_zero_classes():
    doc = wrap("").replace("\n\n", "\n")
    with pytest.raises(MalformedDocument):
        parse_owl(doc)


def test_xml_syntax_error_carries_position():
    with pytest.raises(XmlSyntax) as info:
        parse_owl("<rdf:RDF>\n  <oops\n</rdf:RDF>")
    assert info.value.line >= 2 and info.value.col >= 1
    assert "line" in info.value.location


def test_header_invariant_rejected():
    extra = (
        "    <owl:backwardCompatibleWith>0.9</owl:backwardCompatibleWith>\n"
        "    <owl:incompatibleWith>0.9</owl:incompatibleWith>\n"
    )
    with pytest.raises(MalformedDocument):
        parse_owl(wrap(CLASS_1, header_extra=extra))


def test_text_in_structural_element():
    doc = MINIMAL.replace("<owl:Ontology>", "<owl:Ontology>stray")
    with pytest.raises(MalformedDocument):
        parse_owl(doc)


def test_lenient_mode_keeps_structural_breaches():
    doc = wrap(owl_class(1, "Root") + "\n" + owl_class(2, "Child", parent=99))
    ont = parse_owl(doc, strict=False)
    kinds = {v.kind for v in ont.validate()}
    assert "DanglingParent" in kinds


# --- serialize_owl --------------------------------------------------------------

def test_serialize_single_class(theatre):
    ont = Ontology("solo", VersionHeader("1.0"))
    ont.create_root("Only")
    text = serialize_owl(ont)
    assert text.count("<owl:Class") == 1
    assert parse_owl(text).canonical_key() == ont.canonical_key()


def test_serialize_is_deterministic(theatre):
    assert serialize_owl(theatre) == serialize_owl(theatre)
    assert serialize_json(theatre) == serialize_json(theatre)


def test_serialize_empty_owl_rejected():
    with pytest.raises(ValueError):
        serialize_owl(Ontology("empty"))


def test_owl_round_trip_fixture(theatre):
    text = serialize_owl(theatre)
    again = parse_owl(text)
    assert again.canonical_key() == theatre.canonical_key()
    assert serialize_owl(again) == text


def test_escaping_round_trips():
    ont = Ontology("escape & co", VersionHeader('v<1> & "2"'))
    root = ont.create_root("a & b <c>", {'syn "quoted"'}, {"k<>&\"'": "v<>&"})
    ont.insert_node(root, "child ']]>' end")
    for serializer, parser in ((serialize_owl, parse_owl), (serialize_json, parse_json)):
        assert parser(serializer(ont)).canonical_key() == ont.canonical_key()


# --- JSON ------------------------------------------------------------------------

def test_json_round_trip_fixture(theatre):
    text = serialize_json(theatre)
    again = parse_json(text)
    assert again.canonical_key() == theatre.canonical_key()
    assert serialize_json(again) == text


def test_cross_format_round_trip(theatre):
    via_owl = parse_owl(serialize_owl(theatre))
    via_json = parse_json(serialize_json(via_owl))
    assert via_json.canonical_key() == theatre.canonical_key()


def test_json_duplicate_node_id(theatre):
    data = to_canonical_dict(theatre)
    data["nodes"].append(dict(data["nodes"][1]))
    import json as jsonlib

    with pytest.raises(DuplicateId):
        parse_json(jsonlib.dumps(data))


def test_json_syntax_error_carries_position():
    with pytest.raises(JsonSyntax) as info:
        parse_json('{"domain": "x",\n  "version": }')
    assert info.value.line == 2


def test_json_unknown_keys_rejected(theatre):
    import json as jsonlib

    data = to_canonical_dict(theatre)
    data["surprise"] = 1
    with pytest.raises(MalformedDocument):
        parse_json(jsonlib.dumps(data))


def test_json_bad_field_types(theatre):
    import json as jsonlib

    base = to_canonical_dict(theatre)
    for mutate in (
        lambda d: d["nodes"][0].update(id="1"),
        lambda d: d["nodes"][0].update(label=""),
        lambda d: d["nodes"][1].update(parent="root"),
        lambda d: d["nodes"][0].update(synonyms="nope"),
        lambda d: d["nodes"][0].update(properties={"k": 1}),
    ):
        data = jsonlib.loads(jsonlib.dumps(base))
        mutate(data)
        with pytest.raises(MalformedDocument):
            parse_json(jsonlib.dumps(data))


def test_json_duplicate_object_key():
    with pytest.raises(MalformedDocument):
        parse_json('{"domain": "x", "domain": "y", "version": {"version": "1"}, "nodes": []}')


def test_json_empty_ontology_round_trips():
    empty = Ontology("nothing", VersionHeader("1.0"))
    again = parse_json(serialize_json(empty))
    assert again.canonical_key() == empty.canonical_key()
    assert again.root is None


def test_parser_errors_name_a_location():
    cases = [
        (parse_owl, wrap(owl_class(1, "Root") + "\n" + owl_class(1, "Clone"))),
        (parse_owl, wrap(owl_class(1, "Root") + "\n" + owl_class(2, "B", parent=9))),
        (parse_json, '{"domain": "d", "version": {"version": "1"}, "nodes": [{"id": 0, "label": "x", "parent": null}]}'),
    ]
    for parser, text in cases:
        with pytest.raises(Exception) as info:
            parser(text)
        assert getattr(info.value, "location", None)


# --- randomized round trips -------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_round_trips(seed):
    ont, _ = random_pair(seed, max_nodes=80, max_edits=15)
    owl_text = serialize_owl(ont)
    json_text = serialize_json(ont)
    assert parse_owl(owl_text).canonical_key() == ont.canonical_key()
    assert parse_json(json_text).canonical_key() == ont.canonical_key()
    assert serialize_owl(parse_owl(owl_text)) == owl_text
    assert serialize_json(parse_json(json_text)) == json_text
