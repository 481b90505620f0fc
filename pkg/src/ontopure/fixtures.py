"""A small theatre-flavored ontology used by tests, demos and the benchmark."""

from __future__ import annotations

from .model import Ontology, VersionHeader


def theatre_ontology() -> Ontology:
    """Reference copy: version 1.1, compatible back to 1.0, incompatible with 0.9."""
    ont = Ontology(
        "theatre",
        VersionHeader("1.1", ["1.0"], ["0.9"], prior_version="1.0"),
    )
    root = ont.create_root("Theatre", {"playhouse", "stage arts"}, {"since": "antiquity"})

    genres = ont.insert_node(root, "Genres")
    ont.insert_node(genres, "Drama", {"play"})
    comedy = ont.insert_node(genres, "Comedy", {"farce"})
    ont.insert_node(comedy, "Satire")
    ont.insert_node(comedy, "Slapstick")
    ont.insert_node(genres, "Tragedy")
    musical = ont.insert_node(genres, "Musical", {"musical comedy"})
    ont.insert_node(musical, "Operetta")
    ont.insert_node(genres, "Puppetry", {"marionette"})
    ont.insert_node(genres, "Mime", {"pantomime"})

    craft = ont.insert_node(root, "Stagecraft")
    ont.insert_node(craft, "Lighting", {"illumination"}, {"unit": "lumen"})
    ont.insert_node(craft, "Sound", {"audio"})
    ont.insert_node(craft, "Scenery", {"set design"})
    ont.insert_node(craft, "Costume", {"wardrobe"})
    ont.insert_node(craft, "Makeup")
    ont.insert_node(craft, "Props")

    people = ont.insert_node(root, "People")
    ont.insert_node(people, "Playwright", {"dramatist"})
    ont.insert_node(people, "Director")
    actor = ont.insert_node(people, "Actor", {"performer", "player"})
    ont.insert_node(actor, "Understudy")
    ont.insert_node(people, "Producer")
    ont.insert_node(people, "Choreographer")
    ont.insert_node(people, "Crew", {"stagehand"})

    venues = ont.insert_node(root, "Venues")
    ont.insert_node(venues, "Amphitheatre", {"arena"})
    ont.insert_node(venues, "Proscenium")
    ont.insert_node(venues, "Black Box")
    ont.insert_node(venues, "Opera House")

    history = ont.insert_node(root, "History")
    ont.insert_node(history, "Greek Theatre", set(), {"era": "classical"})
    ont.insert_node(history, "Elizabethan Theatre", set(), {"era": "renaissance"})
    ont.insert_node(history, "Kabuki", set(), {"origin": "japan"})
    ont.insert_node(history, "Commedia dell arte", set(), {"origin": "italy"})
    return ont


def stale_theatre_ontology() -> Ontology:
    """An out-of-date local copy of :func:`theatre_ontology`.

    Still at version 1.0 (which the reference lists as backward
    compatible) and drifted by a handful of edits: a dropped subtree, a
    relabel, a move, a property change, and one extra node.
    """
    ont = theatre_ontology()
    ont.version = VersionHeader("1.0", [], [], prior_version="0.9")

    labels = {node.label: nid for nid, node in ont.nodes.items()}
    ont.delete_node(labels["Puppetry"])                      # now missing
    ont.modify_node(labels["Scenery"], label="Sets")         # label drift
    ont.move_node(labels["Understudy"], labels["Crew"])      # parent drift
    ont.modify_node(labels["Lighting"], properties={"unit": "watt"})
    ont.insert_node(labels["Venues"], "Street Corner")       # extra node
    return ont
