"""In-memory ontology model: a single-rooted, labeled n-ary tree.

Node identity is a positive integer that stays stable across mutations and
is never reused after a delete. A dict keyed by id backs constant-time
lookup; the tree shape lives in the per-node parent/children links, and the
two views are kept consistent by the mutation methods (``validate`` checks
that they agree).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    CannotDeleteRoot,
    DuplicateId,
    DuplicateSiblingLabel,
    EmptyLabel,
    InvalidMove,
    RootAlreadyExists,
    UnknownId,
    UnknownParent,
)

NodeId = int


@dataclass
class VersionHeader:
    """Version annotations carried by an ontology document."""

    version: str
    backward_compatible_with: list[str] = field(default_factory=list)
    incompatible_with: list[str] = field(default_factory=list)
    prior_version: str | None = None

    def violations(self) -> list[str]:
        """Header invariant breaches, empty when the header is well formed."""
        out: list[str] = []
        if not self.version:
            out.append("version string is empty")
        overlap = set(self.backward_compatible_with) & set(self.incompatible_with)
        if overlap:
            out.append(
                "versions listed as both compatible and incompatible: "
                + ", ".join(sorted(overlap))
            )
        if self.version in self.backward_compatible_with or self.version in self.incompatible_with:
            out.append(f"own version {self.version!r} appears in a compatibility list")
        return out

    def copy(self) -> "VersionHeader":
        return VersionHeader(
            self.version,
            list(self.backward_compatible_with),
            list(self.incompatible_with),
            self.prior_version,
        )


@dataclass
class OntologyNode:
    """One concept in the tree."""

    id: NodeId
    label: str
    synonyms: set[str] = field(default_factory=set)
    parent: NodeId | None = None
    children: list[NodeId] = field(default_factory=list)
    properties: dict[str, str] = field(default_factory=dict)

    def copy(self) -> "OntologyNode":
        return OntologyNode(
            self.id,
            self.label,
            set(self.synonyms),
            self.parent,
            list(self.children),
            dict(self.properties),
        )


class DeletePolicy(Enum):
    """What happens to a deleted node's children."""

    SUBTREE = "subtree"
    REPARENT_CHILDREN = "reparent"


@dataclass
class Violation:
    """One invariant breach found by ``Ontology.validate``."""

    kind: str
    message: str
    node_id: NodeId | None = None


class Ontology:
    """A versioned, single-rooted n-ary labeled tree with an id index.

    Ids are dense positive integers handed out by ``next_id``; a deleted
    id is retired for the lifetime of the ontology. An ontology may be
    empty (no root yet); every other state has exactly one root.
    """

    def __init__(self, domain: str, version: VersionHeader | None = None):
        self.domain = domain
        self.version = version if version is not None else VersionHeader("1.0")
        self.root: NodeId | None = None
        self.nodes: dict[NodeId, OntologyNode] = {}
        self.next_id: NodeId = 1

    # -- lookup ------------------------------------------------------------

    def find_node(self, node_id: NodeId) -> OntologyNode | None:
        """Return the node for ``node_id``, or None when absent/retired."""
        return self.nodes.get(node_id)

    def count_nodes(self) -> int:
        """Number of nodes reachable from the root: 1 + the children's counts."""
        if self.root is None:
            return 0
        total = 0
        stack = [self.root]
        while stack:
            node = self.nodes[stack.pop()]
            total += 1
            stack.extend(node.children)
        return total

    def subtree_ids(self, node_id: NodeId) -> list[NodeId]:
        """Preorder ids of the subtree rooted at ``node_id``."""
        node = self.nodes.get(node_id)
        if node is None:
            raise UnknownId(f"no node with id {node_id}")
        out: list[NodeId] = []
        stack = [node_id]
        while stack:
            nid = stack.pop()
            out.append(nid)
            stack.extend(reversed(self.nodes[nid].children))
        return out

    def iter_preorder(self) -> list[NodeId]:
        """Preorder ids of the whole tree (empty list for an empty ontology)."""
        return [] if self.root is None else self.subtree_ids(self.root)

    def path_ids(self, node_id: NodeId) -> list[NodeId]:
        """Ids on the root-to-node path, root first."""
        if node_id not in self.nodes:
            raise UnknownId(f"no node with id {node_id}")
        path: list[NodeId] = []
        cur: NodeId | None = node_id
        while cur is not None:
            path.append(cur)
            cur = self.nodes[cur].parent
        path.reverse()
        return path

    def path_labels(self, node_id: NodeId) -> list[str]:
        return [self.nodes[nid].label for nid in self.path_ids(node_id)]

    def is_ancestor(self, ancestor: NodeId, descendant: NodeId) -> bool:
        """True when ``ancestor`` lies strictly above ``descendant``."""
        cur = self.nodes[descendant].parent
        seen: set[NodeId] = set()
        while cur is not None and cur not in seen:
            if cur == ancestor:
                return True
            seen.add(cur)
            cur = self.nodes[cur].parent
        return False

    # -- mutations -----------------------------------------------------------

    def create_root(
        self,
        label: str,
        synonyms: set[str] | None = None,
        properties: dict[str, str] | None = None,
        *,
        node_id: NodeId | None = None,
    ) -> NodeId:
        """Create the single root node of an empty ontology."""
        if self.root is not None:
            raise RootAlreadyExists(f"root {self.root} already present")
        if not label:
            raise EmptyLabel("root label must be non-empty")
        nid = self._take_id(node_id)
        self.nodes[nid] = OntologyNode(
            nid, label, set(synonyms or ()), None, [], dict(properties or {})
        )
        self.root = nid
        return nid

    def insert_node(
        self,
        parent: NodeId,
        label: str,
        synonyms: set[str] | None = None,
        properties: dict[str, str] | None = None,
        *,
        node_id: NodeId | None = None,
        enforce_unique_labels: bool = True,
    ) -> NodeId:
        """Add a new node at the end of ``parent``'s children.

        ``node_id`` preserves an externally assigned id (patch replay);
        the default draws a fresh one from ``next_id``.
        """
        parent_node = self.nodes.get(parent)
        if parent_node is None:
            raise UnknownParent(f"no node with id {parent}")
        if not label:
            raise EmptyLabel("node label must be non-empty")
        if enforce_unique_labels and self._sibling_label_taken(parent_node, label):
            raise DuplicateSiblingLabel(
                f"parent {parent} already has a child labeled {label!r}"
            )
        nid = self._take_id(node_id)
        self.nodes[nid] = OntologyNode(
            nid, label, set(synonyms or ()), parent, [], dict(properties or {})
        )
        parent_node.children.append(nid)
        return nid

    def delete_node(
        self, node_id: NodeId, policy: DeletePolicy = DeletePolicy.SUBTREE
    ) -> list[NodeId]:
        """Remove a node; returns the removed ids (preorder).

        SUBTREE removes all descendants too; REPARENT_CHILDREN splices the
        children, in order, into the parent's children at the removed
        node's position.
        """
        node = self.nodes.get(node_id)
        if node is None:
            raise UnknownId(f"no node with id {node_id}")
        if node_id == self.root:
            raise CannotDeleteRoot("the root node cannot be deleted")
        parent = self.nodes[node.parent]
        slot = parent.children.index(node_id)
        if policy is DeletePolicy.SUBTREE:
            removed = self.subtree_ids(node_id)
            parent.children.pop(slot)
            for nid in removed:
                del self.nodes[nid]
            return removed
        parent.children[slot : slot + 1] = node.children
        for child in node.children:
            self.nodes[child].parent = node.parent
        del self.nodes[node_id]
        return [node_id]

    def modify_node(
        self,
        node_id: NodeId,
        *,
        label: str | None = None,
        synonyms: set[str] | None = None,
        properties: dict[str, str] | None = None,
        enforce_unique_labels: bool = True,
    ) -> OntologyNode:
        """Update the supplied fields; absent ones stay untouched."""
        node = self.nodes.get(node_id)
        if node is None:
            raise UnknownId(f"no node with id {node_id}")
        if label is not None:
            if not label:
                raise EmptyLabel("node label must be non-empty")
            if label != node.label and enforce_unique_labels and node.parent is not None:
                parent_node = self.nodes[node.parent]
                if self._sibling_label_taken(parent_node, label, exclude=node_id):
                    raise DuplicateSiblingLabel(
                        f"parent {node.parent} already has a child labeled {label!r}"
                    )
            node.label = label
        if synonyms is not None:
            node.synonyms = set(synonyms)
        if properties is not None:
            node.properties = dict(properties)
        return node

    def move_node(
        self,
        node_id: NodeId,
        new_parent: NodeId,
        *,
        enforce_unique_labels: bool = True,
    ) -> OntologyNode:
        """Reattach a node (with its subtree) at the end of ``new_parent``'s children."""
        node = self.nodes.get(node_id)
        if node is None:
            raise UnknownId(f"no node with id {node_id}")
        if node_id == self.root:
            raise InvalidMove("the root node cannot be moved")
        target = self.nodes.get(new_parent)
        if target is None:
            raise UnknownParent(f"no node with id {new_parent}")
        if new_parent == node_id or self.is_ancestor(node_id, new_parent):
            raise InvalidMove(
                f"moving {node_id} under {new_parent} would create a cycle"
            )
        if enforce_unique_labels and new_parent != node.parent:
            if self._sibling_label_taken(target, node.label):
                raise DuplicateSiblingLabel(
                    f"parent {new_parent} already has a child labeled {node.label!r}"
                )
        old_parent = self.nodes[node.parent]
        if new_parent != node.parent:
            old_parent.children.remove(node_id)
            target.children.append(node_id)
            node.parent = new_parent
        return node

    # -- validation and snapshots -------------------------------------------

    def validate(self) -> list[Violation]:
        """Check every structural invariant; returns all breaches found."""
        out: list[Violation] = []
        if self.next_id < 1:
            out.append(Violation("InvalidNextId", f"next_id {self.next_id} < 1"))
        if self.root is None:
            if self.nodes:
                out.append(
                    Violation("RootMissing", "index holds nodes but no root is set")
                )
            return out
        if self.root not in self.nodes:
            out.append(
                Violation("RootMissing", f"root id {self.root} is not in the index")
            )
            return out

        parentless = [n.id for n in self.nodes.values() if n.parent is None]
        if len(parentless) > 1:
            out.append(
                Violation(
                    "MultipleRoots",
                    f"nodes without a parent: {sorted(parentless)}",
                )
            )
        if self.nodes[self.root].parent is not None:
            out.append(
                Violation("RootMissing", f"root {self.root} has a parent link", self.root)
            )

        for node in self.nodes.values():
            if node.id < 1:
                out.append(Violation("InvalidId", f"id {node.id} < 1", node.id))
            if node.id >= self.next_id:
                out.append(
                    Violation(
                        "StaleNextId",
                        f"id {node.id} >= next_id {self.next_id}",
                        node.id,
                    )
                )
            if not node.label:
                out.append(Violation("EmptyLabel", f"node {node.id} has an empty label", node.id))
            if node.parent is not None:
                parent = self.nodes.get(node.parent)
                if parent is None:
                    out.append(
                        Violation(
                            "DanglingParent",
                            f"node {node.id} points at missing parent {node.parent}",
                            node.id,
                        )
                    )
                elif node.id not in parent.children:
                    out.append(
                        Violation(
                            "ParentChildInconsistency",
                            f"node {node.id} not listed among children of {node.parent}",
                            node.id,
                        )
                    )
            if len(set(node.children)) != len(node.children):
                out.append(
                    Violation(
                        "DuplicateChildren",
                        f"node {node.id} lists a child twice",
                        node.id,
                    )
                )
            for child_id in node.children:
                child = self.nodes.get(child_id)
                if child is None:
                    out.append(
                        Violation(
                            "DanglingChild",
                            f"node {node.id} lists missing child {child_id}",
                            node.id,
                        )
                    )
                elif child.parent != node.id:
                    out.append(
                        Violation(
                            "ParentChildInconsistency",
                            f"node {child_id} is listed under {node.id} but claims parent {child.parent}",
                            child_id,
                        )
                    )

        # Reachability with a visited guard, so corrupted shapes terminate.
        seen: set[NodeId] = set()
        stack = [self.root]
        while stack:
            nid = stack.pop()
            if nid in seen or nid not in self.nodes:
                continue
            seen.add(nid)
            stack.extend(self.nodes[nid].children)
        for nid in sorted(self.nodes.keys() - seen):
            out.append(
                Violation("Unreachable", f"node {nid} is not reachable from the root", nid)
            )

        for message in self.version.violations():
            out.append(Violation("InvalidVersionHeader", message))
        return out

    def clone(self) -> "Ontology":
        """Independent deep copy; mutations on either side stay invisible to the other."""
        dup = Ontology(self.domain, self.version.copy())
        dup.root = self.root
        dup.next_id = self.next_id
        dup.nodes = {nid: node.copy() for nid, node in self.nodes.items()}
        return dup

    def canonical_key(self):
        """Hashable canonical form: domain, header, and per-id node state.

        Children order is presentation-only (the wire formats carry parent
        links), so it does not participate.
        """
        header = (
            self.version.version,
            tuple(sorted(self.version.backward_compatible_with)),
            tuple(sorted(self.version.incompatible_with)),
            self.version.prior_version,
        )
        nodes = tuple(
            (
                nid,
                node.label,
                node.parent,
                tuple(sorted(node.synonyms)),
                tuple(sorted(node.properties.items())),
            )
            for nid, node in sorted(self.nodes.items())
        )
        return (self.domain, header, nodes)

    # -- helpers -------------------------------------------------------------

    def _take_id(self, node_id: NodeId | None) -> NodeId:
        if node_id is None:
            nid = self.next_id
            self.next_id += 1
            return nid
        if node_id < 1:
            raise ValueError(f"node id {node_id} is not a positive integer")
        if node_id in self.nodes:
            raise DuplicateId(f"id {node_id} is already in use")
        self.next_id = max(self.next_id, node_id + 1)
        return node_id

    def _sibling_label_taken(
        self, parent: OntologyNode, label: str, exclude: NodeId | None = None
    ) -> bool:
        return any(
            self.nodes[c].label == label for c in parent.children if c != exclude
        )
