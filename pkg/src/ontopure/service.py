"""JSON-over-HTTP front end: public search, authenticated admin edits.

Single-writer, multi-reader: one lock serializes mutations, which work on
a clone, persist it (temp file + atomic rename) and only then swap an
immutable (ontology, revision) pair into place. Readers grab that pair
exactly once per request, so every response is internally consistent and
a client that saw a mutation acknowledged at revision r never reads an
older state afterwards.
"""

from __future__ import annotations

import hmac
import json
import logging
import mimetypes
import os
import tempfile
import threading
import urllib.error
import urllib.request
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import NamedTuple
from urllib.parse import parse_qs, urlsplit

from . import owlio
from .diff import PatchOp, find_mismatches, node_state, purify
from .errors import OntologyError
from .model import DeletePolicy, Ontology
from .search import NEEDS_PURIFICATION, Query, SearchOutcome
from .search import search as run_search

logger = logging.getLogger("ontopure.service")

_MAX_BODY = 10 * 1024 * 1024

_STATUS_BY_CODE = {
    "EmptyQuery": 400,
    "DomainMismatch": 400,
    "BadRequest": 400,
    "BadToken": 401,
    "NoReference": 404,
    "NotFound": 404,
    "UnknownParent": 409,
    "UnknownId": 409,
    "DuplicateSiblingLabel": 409,
    "CannotDeleteRoot": 409,
    "EmptyLabel": 409,
    "InvalidMove": 409,
    "DuplicateId": 409,
    "RootAlreadyExists": 409,
    "InapplicablePatch": 409,
    "IncompatibleVersions": 409,
    "ZeroTotal": 409,
}


class ServiceError(Exception):
    """HTTP-mappable failure; ``code`` picks the status."""

    def __init__(self, code: str, detail: str):
        super().__init__(detail)
        self.code = code
        self.detail = detail


class PersistenceFailure(ServiceError):
    def __init__(self, detail: str):
        super().__init__("PersistenceFailure", detail)


@dataclass
class ServiceConfig:
    snapshot_path: Path
    reference_path_or_url: str | None = None
    bind_addr: str = "127.0.0.1:8080"
    admin_token_env: str = "ONTOPURE_ADMIN_TOKEN"
    admin_token: str | None = None  # overrides the environment when set
    auto_purify: bool = True
    ui_dir: Path | None = None


class Snapshot(NamedTuple):
    ontology: Ontology
    revision: int


def _atomic_write_text(path: Path, text: str) -> None:
    """Write via a temp file in the same directory, then rename into place."""
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, path)
    except OSError:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def load_ontology_file(path: Path, *, strict: bool = True) -> Ontology:
    """Parse a snapshot file, picking the format from suffix (or content)."""
    text = path.read_text(encoding="utf-8")
    suffix = path.suffix.lower()
    if suffix == ".owl" or (suffix != ".json" and text.lstrip().startswith("<")):
        return owlio.parse_owl(text, strict=strict)
    return owlio.parse_json(text, strict=strict)


class OntologyService:
    """Application core behind the HTTP handler (usable directly in tests)."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        ontology = load_ontology_file(Path(config.snapshot_path))
        violations = ontology.validate()
        if violations:
            lines = "; ".join(f"{v.kind}: {v.message}" for v in violations)
            raise ServiceError("InvalidSnapshot", f"snapshot fails validation: {lines}")
        self._snapshot = Snapshot(ontology, 0)
        self._write_lock = threading.Lock()
        self.reference = self._load_reference(config.reference_path_or_url)
        self.admin_token = config.admin_token or os.environ.get(config.admin_token_env)
        if not self.admin_token:
            logger.warning(
                "no admin token configured (%s unset): admin endpoints disabled",
                config.admin_token_env,
            )
        snapshot = Path(config.snapshot_path)
        self.persist_path = (
            snapshot if snapshot.suffix.lower() == ".json" else Path(str(snapshot) + ".json")
        )
        logger.info(
            "serving domain %r (%d nodes) at revision 0", ontology.domain, len(ontology.nodes)
        )

    @staticmethod
    def _load_reference(source: str | None) -> Ontology | None:
        if not source:
            return None
        try:
            if source.startswith(("http://", "https://")):
                with urllib.request.urlopen(source, timeout=10) as response:
                    text = response.read().decode("utf-8")
                if urlsplit(source).path.endswith(".owl") or text.lstrip().startswith("<"):
                    return owlio.parse_owl(text)
                return owlio.parse_json(text)
            return load_ontology_file(Path(source))
        except (OSError, urllib.error.URLError, OntologyError) as exc:
            logger.warning("reference %s unavailable, running degraded: %s", source, exc)
            return None

    # -- reads ---------------------------------------------------------------

    def snapshot(self) -> Snapshot:
        return self._snapshot

    def search(self, raw: str, domain: str) -> tuple[SearchOutcome, int]:
        query = Query(raw, domain)
        snap = self._snapshot
        outcome = run_search(snap.ontology, self.reference, query)
        if (
            outcome.outcome == NEEDS_PURIFICATION
            and self.config.auto_purify
            and self.reference is not None
        ):
            with self._write_lock:
                snap = self._snapshot
                outcome = run_search(snap.ontology, self.reference, query)
                if outcome.outcome == NEEDS_PURIFICATION:
                    result = purify(snap.ontology, self.reference)
                    if result.log:
                        snap = self._commit_locked(result.purified)
                    outcome = run_search(snap.ontology, self.reference, query)
        return outcome, snap.revision

    def report(self):
        if self.reference is None:
            raise ServiceError("NoReference", "no reference ontology is configured")
        snap = self._snapshot
        return find_mismatches(snap.ontology, self.reference)

    # -- mutations -------------------------------------------------------------

    def insert(self, parent, label, synonyms, properties) -> tuple[Snapshot, int]:
        with self._write_lock:
            work = self._snapshot.ontology.clone()
            new_id = work.insert_node(parent, label, set(synonyms), dict(properties))
            return self._commit_locked(work), new_id

    def modify(self, node_id, *, label=None, synonyms=None, properties=None):
        with self._write_lock:
            work = self._snapshot.ontology.clone()
            node = work.modify_node(
                node_id,
                label=label,
                synonyms=set(synonyms) if synonyms is not None else None,
                properties=dict(properties) if properties is not None else None,
            )
            return self._commit_locked(work), node_state(node)

    def delete(self, node_id, policy: DeletePolicy) -> tuple[Snapshot, list[int]]:
        with self._write_lock:
            work = self._snapshot.ontology.clone()
            removed = work.delete_node(node_id, policy)
            return self._commit_locked(work), removed

    def purify_now(self) -> tuple[Snapshot, list[PatchOp]]:
        if self.reference is None:
            raise ServiceError("NoReference", "no reference ontology is configured")
        with self._write_lock:
            snap = self._snapshot
            result = purify(snap.ontology, self.reference)
            if not result.log:
                return snap, []
            return self._commit_locked(result.purified), result.log

    def _commit_locked(self, ontology: Ontology) -> Snapshot:
        """Persist then swap; callers hold the write lock."""
        violations = ontology.validate()
        if violations:  # pragma: no cover - mutations go through core guards
            raise ServiceError(
                "InternalError", f"mutation broke invariants: {violations[0].message}"
            )
        try:
            _atomic_write_text(self.persist_path, owlio.serialize_json(ontology))
        except OSError as exc:
            raise PersistenceFailure(f"could not persist snapshot: {exc}") from exc
        snap = Snapshot(ontology, self._snapshot.revision + 1)
        self._snapshot = snap
        return snap


# --- HTTP layer ---------------------------------------------------------------


def build_handler(service: OntologyService) -> type[BaseHTTPRequestHandler]:
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"
        server_version = "ontopure"

        # -- plumbing -------------------------------------------------------

        def log_message(self, fmt, *args):
            logger.debug("%s %s", self.address_string(), fmt % args)

        def _send(self, status: int, payload: bytes, content_type: str) -> None:
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)

        def _send_json(self, status: int, obj) -> None:
            body = json.dumps(obj, ensure_ascii=False).encode("utf-8")
            self._send(status, body, "application/json; charset=utf-8")

        def _send_error_json(self, code: str, detail: str) -> None:
            status = _STATUS_BY_CODE.get(code, 500)
            self._send_json(status, {"error": code, "detail": detail})

        def _read_body(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            if length > _MAX_BODY:
                raise ServiceError("BadRequest", "request body too large")
            raw = self.rfile.read(length) if length else b"{}"
            try:
                data = json.loads(raw.decode("utf-8") or "{}")
            except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                raise ServiceError("BadRequest", f"body is not valid JSON: {exc}") from exc
            if not isinstance(data, dict):
                raise ServiceError("BadRequest", "body must be a JSON object")
            return data

        def _require_admin(self) -> None:
            header = self.headers.get("Authorization") or ""
            expected = service.admin_token
            if not expected:
                raise ServiceError("BadToken", "admin token not configured on the server")
            if not header.startswith("Bearer ") or not hmac.compare_digest(
                header.removeprefix("Bearer ").encode(), expected.encode()
            ):
                raise ServiceError("BadToken", "missing or wrong bearer token")

        def _dispatch(self, method: str) -> None:
            url = urlsplit(self.path)
            try:
                self._route(method, url.path, parse_qs(url.query))
            except ServiceError as exc:
                self._send_error_json(exc.code, exc.detail)
            except OntologyError as exc:
                self._send_error_json(exc.code, exc.detail)
            except Exception as exc:  # noqa: BLE001 - last-resort boundary
                logger.exception("unhandled error on %s %s", method, self.path)
                self._send_error_json("InternalError", str(exc))

        def do_GET(self):  # noqa: N802
            self._dispatch("GET")

        def do_POST(self):  # noqa: N802
            self._dispatch("POST")

        def do_PUT(self):  # noqa: N802
            self._dispatch("PUT")

        def do_DELETE(self):  # noqa: N802
            self._dispatch("DELETE")

        # -- routes ---------------------------------------------------------

        def _route(self, method: str, path: str, params: dict) -> None:
            if method == "GET":
                if path == "/search":
                    return self._get_search(params)
                if path == "/ontology":
                    snap = service.snapshot()
                    return self._send_json(200, owlio.to_canonical_dict(snap.ontology))
                if path == "/ontology.owl":
                    snap = service.snapshot()
                    body = owlio.serialize_owl(snap.ontology).encode("utf-8")
                    return self._send(200, body, "application/rdf+xml; charset=utf-8")
                if path == "/report":
                    return self._send_json(200, service.report().to_json())
                if path == "/revision":
                    return self._send_json(200, {"revision": service.snapshot().revision})
                if path == "/":
                    return self._send_json(
                        200,
                        {
                            "service": "ontopure",
                            "domain": service.snapshot().ontology.domain,
                            "endpoints": [
                                "/search",
                                "/ontology",
                                "/ontology.owl",
                                "/report",
                                "/revision",
                                "/admin/nodes",
                                "/admin/purify",
                            ],
                        },
                    )
                if path == "/ui" or path.startswith("/ui/"):
                    return self._get_static(path)
            elif method == "POST":
                if path == "/admin/nodes":
                    return self._post_insert()
                if path == "/admin/purify":
                    return self._post_purify()
            elif method == "PUT":
                if path.startswith("/admin/nodes/"):
                    return self._put_modify(self._node_id_from(path))
            elif method == "DELETE":
                if path.startswith("/admin/nodes/"):
                    return self._delete_node(self._node_id_from(path), params)
            raise ServiceError("NotFound", f"no route for {method} {path}")

        @staticmethod
        def _node_id_from(path: str) -> int:
            tail = path.removeprefix("/admin/nodes/")
            if not tail.isdigit():
                raise ServiceError("NotFound", f"node id must be an integer, got {tail!r}")
            return int(tail)

        def _get_search(self, params: dict) -> None:
            raw = (params.get("q") or [""])[0]
            domain = (params.get("domain") or [""])[0]
            if not raw:
                raise ServiceError("EmptyQuery", "missing q parameter")
            if not domain:
                raise ServiceError("DomainMismatch", "missing domain parameter")
            outcome, revision = service.search(raw, domain)
            payload = outcome.to_json()
            payload["revision"] = revision
            self._send_json(200, payload)

        def _post_insert(self) -> None:
            self._require_admin()
            body = self._read_body()
            parent = body.get("parent")
            label = body.get("label")
            if not isinstance(parent, int) or isinstance(parent, bool):
                raise ServiceError("BadRequest", "parent must be an integer node id")
            if not isinstance(label, str):
                raise ServiceError("BadRequest", "label must be a string")
            synonyms = _string_list(body.get("synonyms", []), "synonyms")
            properties = _string_map(body.get("properties", {}), "properties")
            snap, new_id = service.insert(parent, label, synonyms, properties)
            self._send_json(200, {"revision": snap.revision, "result": {"id": new_id}})

        def _put_modify(self, node_id: int) -> None:
            self._require_admin()
            body = self._read_body()
            label = body.get("label")
            if label is not None and not isinstance(label, str):
                raise ServiceError("BadRequest", "label must be a string")
            synonyms = body.get("synonyms")
            if synonyms is not None:
                synonyms = _string_list(synonyms, "synonyms")
            properties = body.get("properties")
            if properties is not None:
                properties = _string_map(properties, "properties")
            snap, node = service.modify(
                node_id, label=label, synonyms=synonyms, properties=properties
            )
            self._send_json(200, {"revision": snap.revision, "result": {"node": node}})

        def _delete_node(self, node_id: int, params: dict) -> None:
            self._require_admin()
            raw = (params.get("policy") or [DeletePolicy.SUBTREE.value])[0]
            try:
                policy = DeletePolicy(raw)
            except ValueError:
                raise ServiceError(
                    "BadRequest", f"policy must be subtree or reparent, got {raw!r}"
                ) from None
            snap, removed = service.delete(node_id, policy)
            self._send_json(
                200, {"revision": snap.revision, "result": {"removed": removed}}
            )

        def _post_purify(self) -> None:
            self._require_admin()
            self._read_body()
            snap, log = service.purify_now()
            self._send_json(
                200,
                {"revision": snap.revision, "patchLog": [op.to_json() for op in log]},
            )

        def _get_static(self, path: str) -> None:
            ui_dir = service.config.ui_dir
            if ui_dir is None:
                raise ServiceError("NotFound", "no UI directory configured")
            rel = path.removeprefix("/ui").lstrip("/") or "index.html"
            base = Path(ui_dir).resolve()
            target = (base / rel).resolve()
            if base not in target.parents and target != base:
                raise ServiceError("NotFound", "path escapes the UI directory")
            if target.is_dir():
                target = target / "index.html"
            if not target.is_file():
                raise ServiceError("NotFound", f"no such asset: {rel}")
            content_type = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
            self._send(200, target.read_bytes(), content_type)

    return Handler


def _string_list(value, name: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ServiceError("BadRequest", f"{name} must be an array of strings")
    return value


def _string_map(value, name: str) -> dict:
    if not isinstance(value, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in value.items()
    ):
        raise ServiceError("BadRequest", f"{name} must map strings to strings")
    return value


def serve(config: ServiceConfig) -> tuple[ThreadingHTTPServer, OntologyService]:
    """Bind the server (not yet serving); caller runs ``serve_forever``."""
    service = OntologyService(config)
    host, _, port = config.bind_addr.rpartition(":")
    server = ThreadingHTTPServer((host or "127.0.0.1", int(port)), build_handler(service))
    server.daemon_threads = True
    logger.info("listening on %s:%d", *server.server_address[:2])
    return server, service
