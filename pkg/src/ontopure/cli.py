"""Command-line entry point.

Exit codes: 0 success (diff: versions agree), 1 validation violations,
2 unreadable/unparseable input or unwritable output, 3 diff found
mismatches, 4 incompatible versions, 5 purify self-check failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import bench as bench_mod
from . import owlio
from .diff import find_mismatches, purify
from .errors import (
    DomainMismatch,
    EmptyQuery,
    IncompatibleVersions,
    OntologyError,
    ParseError,
)
from .model import Ontology
from .search import NEEDS_PURIFICATION, NO_MATCH, Query
from .search import search as run_search
from .service import ServiceConfig, ServiceError, serve

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_IO = 2
EXIT_MISMATCH = 3
EXIT_INCOMPATIBLE = 4
EXIT_SELF_CHECK = 5


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load(path: str, *, fmt: str | None = None, strict: bool = True) -> Ontology:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SystemExit(_fail(f"cannot read {path}: {exc}", EXIT_IO))
    if fmt is None:
        sniffed_owl = path.endswith(".owl") or (
            not path.endswith(".json") and text.lstrip().startswith("<")
        )
        fmt = "owl" if sniffed_owl else "json"
    try:
        if fmt == "owl":
            return owlio.parse_owl(text, strict=strict)
        return owlio.parse_json(text, strict=strict)
    except ParseError as exc:
        raise SystemExit(_fail(f"{path}: {exc}", EXIT_IO))


def cmd_validate(args) -> int:
    ontology = _load(args.path, fmt=args.format, strict=False)
    violations = ontology.validate()
    if args.json:
        print(
            json.dumps(
                {
                    "violations": [
                        {"kind": v.kind, "message": v.message, "nodeId": v.node_id}
                        for v in violations
                    ]
                }
            )
        )
    else:
        for violation in violations:
            print(f"violation: {violation.kind}: {violation.message}")
        if not violations:
            print("ok")
    return EXIT_VIOLATIONS if violations else EXIT_OK


def cmd_count(args) -> int:
    ontology = _load(args.path, fmt=args.format)
    if args.json:
        print(json.dumps({"count": ontology.count_nodes()}))
    else:
        print(ontology.count_nodes())
    return EXIT_OK


def cmd_diff(args) -> int:
    local = _load(args.local, fmt=args.format)
    reference = _load(args.reference, fmt=args.format)
    try:
        report = find_mismatches(local, reference)
    except IncompatibleVersions as exc:
        return _fail(exc.detail, EXIT_INCOMPATIBLE)
    if args.json:
        print(json.dumps(report.to_json()))
    else:
        if report.mismatches:
            rows = [("id", "kinds", "local label", "reference label")]
            for mismatch in report.mismatches:
                rows.append(
                    (
                        str(mismatch.id),
                        ",".join(k.value for k in sorted(mismatch.kinds, key=lambda x: x.value)),
                        (mismatch.local_state or {}).get("label", "-"),
                        (mismatch.reference_state or {}).get("label", "-"),
                    )
                )
            widths = [max(len(row[i]) for row in rows) for i in range(4)]
            for row in rows:
                print("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
        print(f"{report.M}/{report.N} = {float(report.mi):.4f}")
    return EXIT_OK if report.M == 0 else EXIT_MISMATCH


def cmd_purify(args) -> int:
    local = _load(args.local, fmt=args.format)
    reference = _load(args.reference, fmt=args.format)
    try:
        result = purify(local, reference)
    except IncompatibleVersions as exc:
        return _fail(exc.detail, EXIT_INCOMPATIBLE)

    out = Path(args.out)
    as_owl = args.format == "owl" or (args.format is None and out.suffix.lower() == ".owl")
    text = (
        owlio.serialize_owl(result.purified) if as_owl else owlio.serialize_json(result.purified)
    )
    try:
        out.write_text(text, encoding="utf-8")
    except OSError as exc:
        return _fail(f"cannot write {out}: {exc}", EXIT_IO)

    if args.json:
        print(json.dumps({"patchLog": [op.to_json() for op in result.log]}))
    else:
        for op in result.log:
            print(f"{op.seq:>4}  {op.op.value:<9} {json.dumps(op.args, ensure_ascii=False)}")
        print(f"mi = {result.final.mi}")

    # Self-check: re-read what we wrote and re-diff against the reference.
    written = _load(str(out))
    check = find_mismatches(written, reference)
    if check.M != 0 or written.canonical_key() != reference.canonical_key():
        return _fail("self-check failed: purified output still differs", EXIT_SELF_CHECK)
    return EXIT_OK


def cmd_search(args) -> int:
    local = _load(args.path, fmt=args.format)
    reference = _load(args.reference, fmt=args.format) if args.reference else None
    try:
        query = Query(args.query, args.domain or local.domain)
        outcome = run_search(local, reference, query)
    except (EmptyQuery, DomainMismatch) as exc:
        return _fail(exc.detail, EXIT_IO)
    if args.json:
        print(json.dumps(outcome.to_json()))
    elif outcome.outcome == NO_MATCH:
        print("no match")
    elif outcome.outcome == NEEDS_PURIFICATION:
        report = outcome.report
        print("Mismatched ontology")
        print(f"{report.M}/{report.N} = {float(report.mi):.4f}")
    else:
        for result in outcome.results:
            print(f"{result.score:g}  {' > '.join(result.path)}  (id {result.id})")
    return EXIT_MISMATCH if outcome.outcome == NEEDS_PURIFICATION else EXIT_OK


def cmd_serve(args) -> int:
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(message)s")
    config = ServiceConfig(
        snapshot_path=Path(args.snapshot),
        reference_path_or_url=args.reference,
        bind_addr=args.bind,
        admin_token_env=args.token_env,
        auto_purify=not args.no_auto_purify,
        ui_dir=Path(args.ui_dir) if args.ui_dir else None,
    )
    try:
        server, _ = serve(config)
    except (ParseError, ServiceError, OSError) as exc:
        return _fail(str(exc), EXIT_IO)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
    return EXIT_OK


def cmd_bench(args) -> int:
    ontology = _load(args.path, fmt=args.format)
    if args.pages < 1 or args.queries < 1:
        return _fail("--pages and --queries must be at least 1", EXIT_IO)
    records = bench_mod.run_bench(ontology, args.pages, args.queries, args.seed)
    print(bench_mod.to_csv(records), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ontopure",
        description="Ontology store, diff/purification engine, and domain search service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    machine = argparse.ArgumentParser(add_help=False)
    machine.add_argument("--json", action="store_true", help="emit machine-readable JSON")
    machine.add_argument(
        "--format",
        choices=["owl", "json"],
        help="force file format (default: detect by suffix, then content)",
    )

    p = sub.add_parser("validate", parents=[machine], help="check structural invariants")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("count", parents=[machine], help="print the node total")
    p.add_argument("path")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("diff", parents=[machine], help="mismatch report for two versions")
    p.add_argument("local")
    p.add_argument("reference")
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("purify", parents=[machine], help="repair local against reference")
    p.add_argument("local")
    p.add_argument("reference")
    p.add_argument("--out", required=True, help="where to write the purified ontology")
    p.set_defaults(func=cmd_purify)

    p = sub.add_parser("search", parents=[machine], help="keyword search over a file")
    p.add_argument("path")
    p.add_argument("query")
    p.add_argument("--domain", help="domain gate (default: the ontology's own domain)")
    p.add_argument("--reference", help="reference copy for staleness detection")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--snapshot", required=True, help="local ontology file (OWL or JSON)")
    p.add_argument("--reference", help="reference ontology path or URL")
    p.add_argument("--bind", default="127.0.0.1:8080")
    p.add_argument("--token-env", default="ONTOPURE_ADMIN_TOKEN")
    p.add_argument("--no-auto-purify", action="store_true")
    p.add_argument("--ui-dir", help="serve static UI assets from this directory under /ui")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("bench", parents=[machine], help="ontology vs keyword retrieval benchmark")
    p.add_argument("path")
    p.add_argument("--pages", type=int, default=1000)
    p.add_argument("--queries", type=int, default=50)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as exc:  # raised by _load with a prepared exit code
        code = exc.code
        return code if isinstance(code, int) else EXIT_IO
    except OntologyError as exc:
        return _fail(exc.detail, EXIT_IO)


if __name__ == "__main__":
    sys.exit(main())
