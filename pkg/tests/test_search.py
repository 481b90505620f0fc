from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force_diff
from ontopure.diff import purify
from ontopure.errors import DomainMismatch, EmptyQuery
from ontopure.model import OntologyNode
from ontopure.search import (
    HITS,
    NEEDS_PURIFICATION,
    NO_MATCH,
    Query,
    SearchOutcome,
    match_node,
    search,
    tokenize,
)


# --- tokenize ---------------------------------------------------------------

def test_tokenize_single_word():
    assert tokenize("Drama") == ["drama"]


def test_tokenize_split_rule():
    assert tokenize("stage-craft 2024") == ["stage", "craft", "2024"]


def test_tokenize_empty_query():
    with pytest.raises(EmptyQuery):
        tokenize("!!!")
    with pytest.raises(EmptyQuery):
        tokenize("")


@settings(max_examples=60)
@given(st.text())
def test_tokenize_properties(raw):
    try:
        tokens = tokenize(raw)
    except EmptyQuery:
        return
    assert tokens
    for token in tokens:
        assert token == token.lower()
        assert token.isalnum()


# --- match_node ---------------------------------------------------------------

def test_match_exact_token():
    node = OntologyNode(1, "Drama")
    assert match_node(node, ["drama"]) == 1


def test_match_prefix_half_weight():
    node = OntologyNode(1, "Dramatist")
    assert match_node(node, ["drama"]) == 0.5


def test_match_none():
    node = OntologyNode(1, "Lighting")
    assert match_node(node, ["sound"]) == 0


def test_match_counts_synonyms_and_mixed_tokens():
    node = OntologyNode(1, "Actor", synonyms={"performer", "stage player"})
    assert match_node(node, ["performer"]) == 1
    assert match_node(node, ["player", "act"]) == 1.5  # exact + prefix


# --- search ---------------------------------------------------------------------

def test_search_root_hit_ranked_first(theatre):
    outcome = search(theatre, None, Query("theatre", "theatre"))
    assert outcome.outcome == HITS
    assert outcome.results[0].id == theatre.root
    assert outcome.results[0].path == ["Theatre"]
    assert outcome.results[0].links == theatre.nodes[theatre.root].children


def test_search_domain_gate(theatre):
    with pytest.raises(DomainMismatch):
        search(theatre, None, Query("drama", "music"))


def test_search_no_match(theatre):
    outcome = search(theatre, None, Query("zeppelin", "theatre"))
    assert outcome.outcome == NO_MATCH
    assert outcome.results == []


def test_search_needs_purification(theatre, stale_theatre):
    # "Puppetry" exists only in the reference copy.
    outcome = search(stale_theatre, theatre, Query("puppetry", "theatre"))
    assert outcome.outcome == NEEDS_PURIFICATION
    assert outcome.report.M >= 1
    m, n, mi, _ = brute_force_diff(stale_theatre, theatre)
    assert (outcome.report.M, outcome.report.N, outcome.report.mi) == (m, n, mi)


def test_search_no_match_even_in_reference(theatre, stale_theatre):
    outcome = search(stale_theatre, theatre, Query("zeppelin", "theatre"))
    assert outcome.outcome == NO_MATCH


def test_search_ranking_sound(theatre):
    # "drama" matches Drama exactly (1.0) and Dramatist-like labels by prefix.
    theatre.insert_node(theatre.root, "Dramaturgy")
    outcome = search(theatre, None, Query("drama", "theatre"))
    assert outcome.outcome == HITS
    scores = [r.score for r in outcome.results]
    assert scores == sorted(scores, reverse=True)
    assert all(score > 0 for score in scores)
    ties = [r.id for r in outcome.results if r.score == outcome.results[0].score]
    assert ties == sorted(ties)
    assert outcome.results[0].score == 1.0


def test_search_path_correctness(theatre):
    outcome = search(theatre, None, Query("satire", "theatre"))
    assert outcome.outcome == HITS
    result = outcome.results[0]
    # walk the path from the root through children links
    current = theatre.root
    assert theatre.nodes[current].label == result.path[0]
    for label in result.path[1:]:
        current = next(
            c for c in theatre.nodes[current].children if theatre.nodes[c].label == label
        )
    assert current == result.id


def test_search_determinism(theatre):
    first = search(theatre, None, Query("stage", "theatre"))
    second = search(theatre, None, Query("stage", "theatre"))
    assert first.to_json() == second.to_json()


def test_purification_fixpoint(theatre, stale_theatre):
    query = Query("puppetry", "theatre")
    outcome = search(stale_theatre, theatre, query)
    assert outcome.outcome == NEEDS_PURIFICATION
    purified = purify(stale_theatre, theatre).purified
    after = search(purified, theatre, query)
    assert after.outcome in (HITS, NO_MATCH)
    assert after.outcome == HITS  # puppetry is back


def test_outcome_json_round_trip(theatre, stale_theatre):
    for outcome in (
        search(theatre, None, Query("drama", "theatre")),
        search(theatre, None, Query("zeppelin", "theatre")),
        search(stale_theatre, theatre, Query("puppetry", "theatre")),
    ):
        again = SearchOutcome.from_json(outcome.to_json())
        assert again.to_json() == outcome.to_json()


def test_hits_constructor_rejects_empty():
    with pytest.raises(ValueError):
        SearchOutcome.hits([])
