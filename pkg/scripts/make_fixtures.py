#!/usr/bin/env python3
"""Regenerate the shipped theatre fixture files in fixtures/."""

from pathlib import Path

from ontopure.fixtures import stale_theatre_ontology, theatre_ontology
from ontopure.owlio import serialize_json, serialize_owl

out = Path(__file__).resolve().parent.parent / "fixtures"
out.mkdir(exist_ok=True)

reference = theatre_ontology()
stale = stale_theatre_ontology()

(out / "theatre.owl").write_text(serialize_owl(reference), encoding="utf-8")
(out / "theatre.json").write_text(serialize_json(reference), encoding="utf-8")
(out / "theatre-stale.json").write_text(serialize_json(stale), encoding="utf-8")
print(f"wrote {out}/theatre.owl, theatre.json, theatre-stale.json")
