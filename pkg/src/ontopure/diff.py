"""Version diffing and the purification loop.

Two ontology versions are joined on node id. Per-id field comparison
classifies every disagreement into mismatch kinds, which roll up into the
mismatching index mi = M/N (kept as an exact rational). ``purify`` drives
that index to zero on a working copy of the local ontology, emitting a
replayable patch log along the way.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import (
    CannotDeleteRoot,
    DuplicateId,
    DuplicateSiblingLabel,
    EmptyLabel,
    IncompatibleVersions,
    InapplicablePatch,
    InvalidMove,
    NonConvergence,
    RootAlreadyExists,
    UnknownId,
    UnknownParent,
    ZeroTotal,
)
from .model import DeletePolicy, NodeId, Ontology, OntologyNode, VersionHeader


class MismatchKind(Enum):
    MISSING = "missing"            # present only in the reference
    EXTRA = "extra"                # present only in the local copy
    LABEL_CHANGED = "labelChanged"
    MOVED = "moved"                # same id, different parent
    PROPERTY_CHANGED = "propertyChanged"  # properties or synonyms differ


class VersionRelation(Enum):
    IDENTICAL = "identical"
    BACKWARD_COMPATIBLE = "backwardCompatible"
    INCOMPATIBLE = "incompatible"
    UNRELATED = "unrelated"


def node_state(node: OntologyNode) -> dict:
    """Canonical per-node snapshot used in reports and add patches."""
    return {
        "id": node.id,
        "label": node.label,
        "parent": node.parent,
        "synonyms": sorted(node.synonyms),
        "properties": dict(sorted(node.properties.items())),
    }


@dataclass
class Mismatch:
    """One node id whose state diverges between the two versions."""

    id: NodeId
    kinds: set[MismatchKind]
    local_state: dict | None
    reference_state: dict | None

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "kinds": [k.value for k in MismatchKind if k in self.kinds],
            "local": self.local_state,
            "reference": self.reference_state,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Mismatch":
        return cls(
            id=data["id"],
            kinds={MismatchKind(k) for k in data["kinds"]},
            local_state=data["local"],
            reference_state=data["reference"],
        )


@dataclass
class MismatchReport:
    """Diff summary: the mismatches plus M, N and mi = M/N."""

    mismatches: list[Mismatch]
    M: int
    N: int
    mi: Fraction

    def to_json(self) -> dict:
        return {
            "mismatches": [m.to_json() for m in self.mismatches],
            "M": self.M,
            "N": self.N,
            "mi": str(self.mi),
        }

    @classmethod
    def from_json(cls, data: dict) -> "MismatchReport":
        return cls(
            mismatches=[Mismatch.from_json(m) for m in data["mismatches"]],
            M=data["M"],
            N=data["N"],
            mi=Fraction(data["mi"]),
        )


class PatchOpKind(Enum):
    ADD = "add"
    DELETE = "delete"
    MODIFY = "modify"
    MOVE = "move"
    SET_HEADER = "setHeader"


@dataclass
class PatchOp:
    """One purification action; ``args`` mirrors the wire JSON exactly."""

    seq: int
    op: PatchOpKind
    args: dict

    def to_json(self) -> dict:
        return {"seq": self.seq, "op": self.op.value, "args": self.args}

    @classmethod
    def from_json(cls, data: dict) -> "PatchOp":
        return cls(seq=data["seq"], op=PatchOpKind(data["op"]), args=data["args"])


@dataclass
class PurifyResult:
    purified: Ontology
    log: list[PatchOp]
    final: MismatchReport


def mismatching_index(m: int, n: int) -> Fraction:
    """The exact rational M/N."""
    if n < 1:
        raise ZeroTotal("mismatching index is undefined for N = 0")
    if m < 0 or m > n:
        raise ValueError(f"M must lie in [0, N]; got M={m}, N={n}")
    return Fraction(m, n)


def compare_versions(local: Ontology, reference: Ontology) -> VersionRelation:
    """Classify the version relation the reference declares toward the local copy."""
    local_version = local.version.version
    ref = reference.version
    if local_version == ref.version:
        return VersionRelation.IDENTICAL
    if local_version in ref.backward_compatible_with:
        return VersionRelation.BACKWARD_COMPATIBLE
    if local_version in ref.incompatible_with:
        return VersionRelation.INCOMPATIBLE
    return VersionRelation.UNRELATED


def _gate(local: Ontology, reference: Ontology) -> None:
    if compare_versions(local, reference) is VersionRelation.INCOMPATIBLE:
        raise IncompatibleVersions(
            f"reference {reference.version.version!r} declares local "
            f"{local.version.version!r} incompatible; replace instead of purifying"
        )


def find_mismatches(local: Ontology, reference: Ontology) -> MismatchReport:
    """Join both id sets and classify every divergent id, ascending by id."""
    _gate(local, reference)
    ids = sorted(local.nodes.keys() | reference.nodes.keys())
    if not ids:
        raise ZeroTotal("both ontologies are empty; nothing to compare")
    mismatches: list[Mismatch] = []
    for nid in ids:
        local_node = local.nodes.get(nid)
        ref_node = reference.nodes.get(nid)
        kinds: set[MismatchKind] = set()
        if local_node is None:
            kinds.add(MismatchKind.MISSING)
        elif ref_node is None:
            kinds.add(MismatchKind.EXTRA)
        else:
            if local_node.label != ref_node.label:
                kinds.add(MismatchKind.LABEL_CHANGED)
            if local_node.parent != ref_node.parent:
                kinds.add(MismatchKind.MOVED)
            if (
                local_node.properties != ref_node.properties
                or local_node.synonyms != ref_node.synonyms
            ):
                kinds.add(MismatchKind.PROPERTY_CHANGED)
        if kinds:
            mismatches.append(
                Mismatch(
                    nid,
                    kinds,
                    node_state(local_node) if local_node else None,
                    node_state(ref_node) if ref_node else None,
                )
            )
    m, n = len(mismatches), len(ids)
    return MismatchReport(mismatches, m, n, mismatching_index(m, n))


# --- patch application ------------------------------------------------------

def _header_key(header: VersionHeader):
    return (
        header.version,
        tuple(sorted(header.backward_compatible_with)),
        tuple(sorted(header.incompatible_with)),
        header.prior_version,
    )


def _header_to_json(header: VersionHeader) -> dict:
    return {
        "version": header.version,
        "backwardCompatibleWith": sorted(header.backward_compatible_with),
        "incompatibleWith": sorted(header.incompatible_with),
        "priorVersion": header.prior_version,
    }


def _header_from_json(data: dict) -> VersionHeader:
    return VersionHeader(
        data["version"],
        list(data["backwardCompatibleWith"]),
        list(data["incompatibleWith"]),
        data["priorVersion"],
    )


def _apply_in_place(ontology: Ontology, op: PatchOp) -> None:
    """Apply one op to the ontology, mutating it.

    Sibling-label uniqueness is deliberately not enforced here: a patch
    sequence may pass through transient states (label swaps between
    siblings via moves) that the interactive mutations would reject. The
    structural invariants still hold after every op.
    """
    args = op.args
    try:
        if op.op is PatchOpKind.ADD:
            node = args["node"]
            if args["parent"] is None:
                ontology.create_root(
                    node["label"],
                    set(node["synonyms"]),
                    dict(node["properties"]),
                    node_id=node["id"],
                )
            else:
                ontology.insert_node(
                    args["parent"],
                    node["label"],
                    set(node["synonyms"]),
                    dict(node["properties"]),
                    node_id=node["id"],
                    enforce_unique_labels=False,
                )
        elif op.op is PatchOpKind.DELETE:
            ontology.delete_node(args["id"], DeletePolicy(args["policy"]))
        elif op.op is PatchOpKind.MODIFY:
            ontology.modify_node(
                args["id"],
                label=args.get("label"),
                synonyms=set(args["synonyms"]) if "synonyms" in args else None,
                properties=dict(args["properties"]) if "properties" in args else None,
                enforce_unique_labels=False,
            )
        elif op.op is PatchOpKind.MOVE:
            ontology.move_node(
                args["id"], args["newParent"], enforce_unique_labels=False
            )
        elif op.op is PatchOpKind.SET_HEADER:
            ontology.domain = args["domain"]
            ontology.version = _header_from_json(args["version"])
        else:  # pragma: no cover - enum is closed
            raise InapplicablePatch(f"unknown op kind {op.op!r}")
    except (
        UnknownId,
        UnknownParent,
        DuplicateId,
        DuplicateSiblingLabel,
        EmptyLabel,
        CannotDeleteRoot,
        RootAlreadyExists,
        InvalidMove,
        ValueError,
        KeyError,
    ) as exc:
        raise InapplicablePatch(f"op {op.seq} ({op.op.value}): {exc}") from exc


def apply_patch(ontology: Ontology, op: PatchOp) -> Ontology:
    """Pure single-op replay: returns a new ontology, input untouched."""
    work = ontology.clone()
    _apply_in_place(work, op)
    return work


def apply_patch_log(ontology: Ontology, ops: list[PatchOp]) -> Ontology:
    """Replay a whole purification log against a copy of ``ontology``."""
    work = ontology.clone()
    for op in ops:
        _apply_in_place(work, op)
    return work


# --- purification -----------------------------------------------------------

def purify(local: Ontology, reference: Ontology) -> PurifyResult:
    """Repair the local copy until it matches the reference (mi = 0).

    Extras are deleted (children reparented), missing nodes are added
    under their reference parent — adding any missing ancestors first —
    and field or parent drift is repaired in place. Both versions must
    agree on the root id; a local copy whose root is absent from the
    reference must be replaced, not purified.
    """
    _gate(local, reference)
    work = local.clone()
    log: list[PatchOp] = []

    def emit(kind: PatchOpKind, args: dict) -> None:
        op = PatchOp(len(log) + 1, kind, args)
        log.append(op)
        _apply_in_place(work, op)

    bound = max(len(work.nodes.keys() | reference.nodes.keys()), 1)
    iterations = 0
    previous_mi: Fraction | None = None
    report = find_mismatches(work, reference)
    while report.M != 0:
        if iterations >= bound:
            raise NonConvergence(f"no fixpoint after {bound} iterations")
        if previous_mi is not None and report.mi >= previous_mi:
            raise NonConvergence(
                f"mismatching index stopped falling: {previous_mi} -> {report.mi}"
            )
        previous_mi = report.mi
        _run_pass(work, reference, report, emit)
        iterations += 1
        report = find_mismatches(work, reference)

    if work.domain != reference.domain or _header_key(work.version) != _header_key(
        reference.version
    ):
        emit(
            PatchOpKind.SET_HEADER,
            {"domain": reference.domain, "version": _header_to_json(reference.version)},
        )
    final = find_mismatches(work, reference)
    if final.M != 0:  # pragma: no cover - guarded by the loop above
        raise NonConvergence("purified copy still mismatches the reference")

    # Present children in the reference's order; the id sets now agree.
    for nid, ref_node in reference.nodes.items():
        work.nodes[nid].children = list(ref_node.children)
    return PurifyResult(work, log, final)


def _run_pass(work, reference, report, emit) -> None:
    """One repair sweep over the report, ascending by id.

    A missing node's immediate ancestors are added first, so adds always
    land under an existing parent. Moves that would transiently create a
    cycle are retried afterwards in reference preorder, where each node's
    reference ancestors are already in their final position.
    """

    def ensure_present(nid: NodeId) -> None:
        if nid in work.nodes:
            return
        ref_node = reference.nodes[nid]
        if ref_node.parent is not None and ref_node.parent not in work.nodes:
            ensure_present(ref_node.parent)
        state = node_state(ref_node)
        parent = state.pop("parent")
        emit(PatchOpKind.ADD, {"parent": parent, "node": state})

    def try_move(nid: NodeId) -> bool:
        new_parent = reference.nodes[nid].parent
        if new_parent is None:
            raise InapplicablePatch(
                f"node {nid} is the reference root but not the local root; "
                "the versions do not share a root"
            )
        if new_parent not in work.nodes:
            ensure_present(new_parent)
        if nid == new_parent or work.is_ancestor(nid, new_parent):
            return False
        emit(PatchOpKind.MOVE, {"id": nid, "newParent": new_parent})
        return True

    deferred_moves: list[NodeId] = []
    for mismatch in report.mismatches:
        kinds = mismatch.kinds
        if MismatchKind.MISSING in kinds:
            ensure_present(mismatch.id)
            continue
        if MismatchKind.EXTRA in kinds:
            if mismatch.id == work.root:
                raise InapplicablePatch(
                    "the local root is absent from the reference; replace the "
                    "ontology instead of purifying"
                )
            emit(
                PatchOpKind.DELETE,
                {"id": mismatch.id, "policy": DeletePolicy.REPARENT_CHILDREN.value},
            )
            continue
        ref_node = reference.nodes[mismatch.id]
        deltas: dict = {}
        if MismatchKind.LABEL_CHANGED in kinds:
            deltas["label"] = ref_node.label
        if MismatchKind.PROPERTY_CHANGED in kinds:
            deltas["synonyms"] = sorted(ref_node.synonyms)
            deltas["properties"] = dict(sorted(ref_node.properties.items()))
        if deltas:
            emit(PatchOpKind.MODIFY, {"id": mismatch.id, **deltas})
        if MismatchKind.MOVED in kinds and not try_move(mismatch.id):
            deferred_moves.append(mismatch.id)

    if deferred_moves:
        order = {nid: pos for pos, nid in enumerate(reference.iter_preorder())}
        for nid in sorted(deferred_moves, key=order.__getitem__):
            try_move(nid)  # a second deferral is picked up by the outer loop
