"""Benchmark harness: ontology-guided retrieval vs a keyword baseline.

A synthetic corpus of pages is generated over an ontology; each page is
tagged with the node it is about (the ground truth), contains that node's
label, a sample of its ancestors' labels, and seeded noise words. Queries
are node labels. A retrieved page is "perfect" when its ground-truth node
is the queried node or one of its descendants.

The ontology engine retrieves by subtree membership, so everything it
returns is perfect; the keyword engine substring-scans the page text and
misses descendant pages that never mention the queried label. Identical
seeds reproduce the corpus, the queries, and the perfect-page counts
exactly — only the elapsed times vary.
"""

from __future__ import annotations

import csv
import io
import random
import time
from dataclasses import dataclass

from .model import NodeId, Ontology

ONTOLOGY_ENGINE = "ontology"
KEYWORD_ENGINE = "keyword"

# Deliberately disjoint from fixture labels so substring hits stay honest.
_NOISE_WORDS = (
    "umbra quartz meadow lantern copper velvet north anchor tide ember "
    "willow harbor summit cedar prism orchard garnet breeze tundra fen "
    "mosaic saffron juniper cobalt dune heather sable ridge quill vapor "
    "loch bramble onyx crag fjord heath marsh brook pine vale"
).split()

_ANCESTOR_SAMPLE_RATE = 0.3


@dataclass
class Page:
    node_id: NodeId
    text: str


@dataclass
class BenchRecord:
    engine: str
    elapsed_ms: int
    perfect_pages: int


def generate_corpus(ontology: Ontology, pages: int, rng: random.Random) -> list[Page]:
    ids = sorted(ontology.nodes)
    corpus: list[Page] = []
    for _ in range(pages):
        nid = rng.choice(ids)
        words = [ontology.nodes[nid].label.lower()]
        for ancestor in ontology.path_ids(nid)[:-1]:
            if rng.random() < _ANCESTOR_SAMPLE_RATE:
                words.append(ontology.nodes[ancestor].label.lower())
        words.extend(rng.choice(_NOISE_WORDS) for _ in range(rng.randint(5, 10)))
        rng.shuffle(words)
        corpus.append(Page(nid, " ".join(words)))
    return corpus


def pick_queries(ontology: Ontology, count: int, rng: random.Random) -> list[str]:
    labels = sorted(node.label for node in ontology.nodes.values())
    return [rng.choice(labels) for _ in range(count)]


def run_bench(
    ontology: Ontology, pages: int, queries: int, seed: int
) -> list[BenchRecord]:
    """Run both engines over the same seeded corpus and query set."""
    rng = random.Random(seed)
    corpus = generate_corpus(ontology, pages, rng)
    query_labels = pick_queries(ontology, queries, rng)

    by_label = {node.label: nid for nid, node in sorted(ontology.nodes.items())}
    subtree_cache = {nid: set(ontology.subtree_ids(nid)) for nid in ontology.nodes}

    records: list[BenchRecord] = []

    cumulative = 0
    start = time.perf_counter()
    for label in query_labels:
        subtree = subtree_cache[by_label[label]]
        cumulative += sum(1 for page in corpus if page.node_id in subtree)
        elapsed = int((time.perf_counter() - start) * 1000)
        records.append(BenchRecord(ONTOLOGY_ENGINE, elapsed, cumulative))

    cumulative = 0
    start = time.perf_counter()
    for label in query_labels:
        needle = label.lower()
        subtree = subtree_cache[by_label[label]]
        cumulative += sum(
            1 for page in corpus if needle in page.text and page.node_id in subtree
        )
        elapsed = int((time.perf_counter() - start) * 1000)
        records.append(BenchRecord(KEYWORD_ENGINE, elapsed, cumulative))

    return records


def to_csv(records: list[BenchRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["engine", "elapsed_ms", "perfect_pages"])
    for record in records:
        writer.writerow([record.engine, record.elapsed_ms, record.perfect_pages])
    return buffer.getvalue()


def final_perfect_pages(records: list[BenchRecord], engine: str) -> int:
    rows = [r.perfect_pages for r in records if r.engine == engine]
    return rows[-1] if rows else 0
