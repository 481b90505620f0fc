from __future__ import annotations

import pytest

from ontopure.fixtures import stale_theatre_ontology, theatre_ontology


@pytest.fixture
def theatre():
    return theatre_ontology()


@pytest.fixture
def stale_theatre():
    return stale_theatre_ontology()
