"""Seeded random ontology and edit-script generators shared by the tests."""

from __future__ import annotations

import random

from ontopure.model import Ontology, VersionHeader

WORDS = (
    "alder aster basalt beacon birch bison brook cairn cedar cliff cloud "
    "comet coral crane creek delta dune ember falcon fern fjord flint gale "
    "garnet geyser glade grove gull heath heron holly ibis inlet iris jade "
    "jetty kelp knoll lagoon larch lichen linden loam lynx maple marsh mesa "
    "moss newt oak opal osprey otter pebble pine plume quartz raven reed "
    "ridge river sage sedge shale sparrow spruce stone swan tarn teal thorn "
    "tide trout tundra vale wren yew zephyr"
).split()

DOMAINS = ("rivers", "minerals", "birds", "woodland", "coastline")


class LabelMint:
    """Hands out globally unique labels, so sibling uniqueness never trips."""

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.counter = 0

    def label(self) -> str:
        self.counter += 1
        return f"{self.rng.choice(WORDS)} {self.counter}"


def random_ontology(
    rng: random.Random, max_nodes: int = 500, min_nodes: int = 1
) -> tuple[Ontology, LabelMint]:
    mint = LabelMint(rng)
    version = VersionHeader(f"{rng.randint(1, 3)}.{rng.randint(0, 9)}")
    ont = Ontology(rng.choice(DOMAINS), version)
    total = rng.randint(min_nodes, max_nodes)
    root = ont.create_root(mint.label(), _synonyms(rng), _properties(rng))
    ids = [root]
    for _ in range(total - 1):
        parent = rng.choice(ids)
        ids.append(ont.insert_node(parent, mint.label(), _synonyms(rng), _properties(rng)))
    return ont, mint


def _synonyms(rng: random.Random) -> set[str]:
    return {rng.choice(WORDS) for _ in range(rng.randint(0, 2))}


def _properties(rng: random.Random) -> dict[str, str]:
    return {rng.choice(WORDS): rng.choice(WORDS) for _ in range(rng.randint(0, 2))}


def random_edits(rng: random.Random, ont: Ontology, mint: LabelMint, max_edits: int) -> int:
    """Apply up to ``max_edits`` random legal edits in place; returns the count."""
    applied = 0
    budget = rng.randint(0, max_edits)
    for _ in range(budget):
        kind = rng.choice(("insert", "delete", "relabel", "move", "properties", "synonyms"))
        ids = list(ont.nodes)
        if kind == "insert":
            ont.insert_node(rng.choice(ids), mint.label(), _synonyms(rng), _properties(rng))
        elif kind == "delete":
            candidates = [
                nid
                for nid in ids
                if nid != ont.root and len(ont.subtree_ids(nid)) <= 20
            ]
            if not candidates or len(ont.nodes) <= 2:
                continue
            ont.delete_node(rng.choice(candidates))
        elif kind == "relabel":
            ont.modify_node(rng.choice(ids), label=mint.label())
        elif kind == "move":
            movers = [nid for nid in ids if nid != ont.root]
            if not movers:
                continue
            mover = rng.choice(movers)
            forbidden = set(ont.subtree_ids(mover))
            targets = [nid for nid in ids if nid not in forbidden]
            if not targets:
                continue
            ont.move_node(mover, rng.choice(targets))
        elif kind == "properties":
            ont.modify_node(rng.choice(ids), properties=_properties(rng))
        else:
            ont.modify_node(rng.choice(ids), synonyms=_synonyms(rng))
        applied += 1
    return applied


def random_pair(
    seed: int, max_nodes: int = 500, max_edits: int = 50
) -> tuple[Ontology, Ontology]:
    """(local, reference) where local drifted from the reference by random edits."""
    rng = random.Random(seed)
    reference, mint = random_ontology(rng, max_nodes)
    local = reference.clone()

    flavor = rng.random()
    if flavor < 0.25:
        # Local lags a version the reference declares compatible.
        old = f"{reference.version.version}-old"
        reference.version.backward_compatible_with.append(old)
        local.version = VersionHeader(old)
    elif flavor < 0.40:
        local.version = VersionHeader(f"{local.version.version}-wip")

    random_edits(rng, local, mint, max_edits)
    return local, reference
