from __future__ import annotations

import json

import pytest

from ontopure.cli import (
    EXIT_INCOMPATIBLE,
    EXIT_IO,
    EXIT_MISMATCH,
    EXIT_OK,
    EXIT_VIOLATIONS,
    main,
)
from ontopure.diff import MismatchReport, PatchOp
from ontopure.fixtures import stale_theatre_ontology, theatre_ontology
from ontopure.model import Ontology, VersionHeader
from ontopure.owlio import parse_json, serialize_json, serialize_owl
from ontopure.search import SearchOutcome


@pytest.fixture
def theatre_file(tmp_path):
    path = tmp_path / "theatre.json"
    path.write_text(serialize_json(theatre_ontology()), encoding="utf-8")
    return str(path)


@pytest.fixture
def stale_file(tmp_path):
    path = tmp_path / "stale.owl"
    path.write_text(serialize_owl(stale_theatre_ontology()), encoding="utf-8")
    return str(path)


# --- validate -----------------------------------------------------------------

def test_validate_ok(theatre_file, capsys):
    assert main(["validate", theatre_file]) == EXIT_OK
    assert "ok" in capsys.readouterr().out


def test_validate_corrupt_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert main(["validate", str(bad)]) == EXIT_IO
    assert "error:" in capsys.readouterr().err


def test_validate_unreadable_path(tmp_path):
    assert main(["validate", str(tmp_path / "absent.json")]) == EXIT_IO


def test_validate_dangling_parent_is_a_violation(tmp_path, capsys):
    ont = theatre_ontology()
    data = json.loads(serialize_json(ont))
    data["nodes"][5]["parent"] = 9999
    path = tmp_path / "dangling.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    assert main(["validate", str(path)]) == EXIT_VIOLATIONS
    out = capsys.readouterr().out
    assert out.count("DanglingParent") == 1


def test_validate_json_output(theatre_file, capsys):
    assert main(["validate", "--json", theatre_file]) == EXIT_OK
    assert json.loads(capsys.readouterr().out) == {"violations": []}


# --- count ---------------------------------------------------------------------

def test_count(theatre_file, capsys):
    assert main(["count", theatre_file]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "36"


def test_count_json(theatre_file, capsys):
    main(["count", "--json", theatre_file])
    assert json.loads(capsys.readouterr().out) == {"count": 36}


# --- diff ------------------------------------------------------------------------

def test_diff_identical(theatre_file, capsys):
    assert main(["diff", theatre_file, theatre_file]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "0/36 = 0.0000"


def test_diff_one_edit(tmp_path, theatre_file, capsys):
    edited = theatre_ontology()
    edited.modify_node(edited.root, label="Theater")
    local = tmp_path / "edited.json"
    local.write_text(serialize_json(edited), encoding="utf-8")
    assert main(["diff", str(local), theatre_file]) == EXIT_MISMATCH
    out = capsys.readouterr().out
    rows = [line for line in out.splitlines() if line and not line.startswith("id")]
    assert len(rows) == 2  # one mismatch row + the mi line
    assert "1/36 = 0.0278" in out


def test_diff_incompatible(tmp_path, theatre_file):
    old = theatre_ontology()
    old.version = VersionHeader("0.9")
    local = tmp_path / "old.json"
    local.write_text(serialize_json(old), encoding="utf-8")
    assert main(["diff", str(local), theatre_file]) == EXIT_INCOMPATIBLE


def test_diff_json_parses_back(stale_file, theatre_file, capsys):
    assert main(["diff", "--json", stale_file, theatre_file]) == EXIT_MISMATCH
    report = MismatchReport.from_json(json.loads(capsys.readouterr().out))
    assert report.M == 5


# --- purify ------------------------------------------------------------------------

def test_purify_identical(tmp_path, theatre_file, capsys):
    out = tmp_path / "purified.json"
    assert main(["purify", theatre_file, theatre_file, "--out", str(out)]) == EXIT_OK
    assert "mi = 0" in capsys.readouterr().out
    assert parse_json(out.read_text()).canonical_key() == theatre_ontology().canonical_key()


def test_purify_stale_fixture(tmp_path, stale_file, theatre_file, capsys):
    out = tmp_path / "purified.owl"
    assert main(["purify", stale_file, theatre_file, "--out", str(out)]) == EXIT_OK
    stdout = capsys.readouterr().out
    assert "mi = 0" in stdout
    assert main(["diff", str(out), theatre_file]) == EXIT_OK


def test_purify_json_log_parses_back(tmp_path, stale_file, theatre_file, capsys):
    out = tmp_path / "purified.json"
    assert main(["purify", "--json", stale_file, theatre_file, "--out", str(out)]) == EXIT_OK
    log = json.loads(capsys.readouterr().out)["patchLog"]
    ops = [PatchOp.from_json(op) for op in log]
    assert [op.seq for op in ops] == list(range(1, len(ops) + 1))


def test_purify_unwritable_out(tmp_path, theatre_file):
    out = tmp_path / "missing-dir" / "purified.json"
    assert main(["purify", theatre_file, theatre_file, "--out", str(out)]) == EXIT_IO


def test_purify_incompatible(tmp_path, theatre_file):
    old = theatre_ontology()
    old.version = VersionHeader("0.9")
    local = tmp_path / "old.json"
    local.write_text(serialize_json(old), encoding="utf-8")
    out = tmp_path / "purified.json"
    assert main(["purify", str(local), theatre_file, "--out", str(out)]) == EXIT_INCOMPATIBLE


# --- search ---------------------------------------------------------------------------

def test_search_hits(theatre_file, capsys):
    assert main(["search", theatre_file, "drama"]) == EXIT_OK
    assert "Drama" in capsys.readouterr().out


def test_search_mismatch_banner(stale_file, theatre_file, capsys):
    code = main(["search", stale_file, "puppetry", "--reference", theatre_file])
    assert code == EXIT_MISMATCH
    assert "Mismatched ontology" in capsys.readouterr().out


def test_search_domain_gate(theatre_file, capsys):
    assert main(["search", theatre_file, "drama", "--domain", "music"]) == EXIT_IO


def test_search_json_parses_back(theatre_file, capsys):
    assert main(["search", "--json", theatre_file, "stage"]) == EXIT_OK
    outcome = SearchOutcome.from_json(json.loads(capsys.readouterr().out))
    assert outcome.outcome == "hits"


# --- bench ------------------------------------------------------------------------------

def test_bench_deterministic_modulo_elapsed(theatre_file, capsys):
    assert main(["bench", theatre_file, "--pages", "50", "--queries", "5", "--seed", "4"]) == EXIT_OK
    first = capsys.readouterr().out
    main(["bench", theatre_file, "--pages", "50", "--queries", "5", "--seed", "4"])
    second = capsys.readouterr().out

    def strip_elapsed(text):
        rows = [line.split(",") for line in text.strip().splitlines()]
        return [(r[0], r[2]) for r in rows[1:]]

    assert first.splitlines()[0] == "engine,elapsed_ms,perfect_pages"
    assert strip_elapsed(first) == strip_elapsed(second)


def test_bench_single_root_page(tmp_path, capsys):
    ont = Ontology("solo", VersionHeader("1.0"))
    ont.create_root("Everything")
    path = tmp_path / "solo.json"
    path.write_text(serialize_json(ont), encoding="utf-8")
    assert main(["bench", str(path), "--pages", "1", "--queries", "1"]) == EXIT_OK
    rows = capsys.readouterr().out.strip().splitlines()[1:]
    ontology_rows = [r for r in rows if r.startswith("ontology,")]
    assert ontology_rows[-1].endswith(",1")


def test_bench_rejects_bad_counts(theatre_file):
    assert main(["bench", theatre_file, "--pages", "0"]) == EXIT_IO
