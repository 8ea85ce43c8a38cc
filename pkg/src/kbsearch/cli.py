"""Operator CLI: build, inspect, and serve knowledge bases.

Exit codes: 0 success, 1 validation/user error, 2 I/O or provider
failure. Data goes to stdout, diagnostics to stderr. --stub <seed>
makes every command runnable without a model server.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import cluster as cluster_mod
from .corpus import compute_stats, load_manifest
from .embedding import EmbedderDescriptor, RemoteEmbedder, StubEmbedder, stub_embed
from .errors import (
    DuplicateId,
    KbSearchError,
    ParseError,
    ProviderError,
    ProviderUnreachable,
)
from .search import SearchParams, search
from .store import build_kb, load_kb, save_kb

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


def _fail(code: int, message: str) -> int:
    print(message, file=sys.stderr)
    return code


def cmd_build(args) -> int:
    try:
        manifest = load_manifest(args.manifest)
    except FileNotFoundError as exc:
        return _fail(EXIT_IO, f"cannot read manifest: {exc}")
    except (ParseError, DuplicateId) as exc:
        return _fail(EXIT_VALIDATION, f"invalid manifest: {exc}")

    if args.stub is not None:
        embedder = StubEmbedder(seed=args.stub, dim=args.dim, name=args.model)
    else:
        descriptor = EmbedderDescriptor(name=args.model, modality="text",
                                        dim=args.dim, pooling=args.pooling)
        embedder = RemoteEmbedder(args.provider, descriptor)
    try:
        kb = build_kb(manifest, embedder.embed, embedder.descriptor)
        save_kb(kb, args.output)
    except (ProviderUnreachable, ProviderError, OSError, KbSearchError) as exc:
        return _fail(EXIT_IO, f"build failed: {exc}")
    summary = {"n": len(kb), "dim": kb.descriptor.dim, "model": kb.descriptor.name}
    if args.json:
        print(json.dumps(summary))
    else:
        print(f"built kb: n={summary['n']} dim={summary['dim']} "
              f"model={summary['model']}")
    return EXIT_OK


def cmd_search(args) -> int:
    try:
        kb = load_kb(args.kb)
    except (OSError, KbSearchError) as exc:
        return _fail(EXIT_IO, f"cannot load kb: {exc}")
    try:
        if args.stub is not None:
            qvec = stub_embed(args.query, kb.descriptor.dim, args.stub)
        else:
            from .embedding import remote_embed
            qvec = remote_embed(args.provider, kb.descriptor.name, args.query,
                                kb.descriptor.pooling,
                                expected_dim=kb.descriptor.dim)
    except (ProviderUnreachable, ProviderError) as exc:
        return _fail(EXIT_IO, f"embedding failed: {exc}")
    try:
        params = SearchParams(top_k=args.k, threshold=args.threshold)
    except ValueError as exc:
        return _fail(EXIT_VALIDATION, str(exc))
    result = search(kb, qvec, params)
    if args.json:
        print(json.dumps({
            "model": result.model,
            "threshold_used": result.threshold_used,
            "hits": [{"rank": h.rank, "id": h.id, "score": h.score}
                     for h in result.hits],
        }))
    else:
        for hit in result.hits:
            print(f"{hit.rank}\t{hit.id}\t{hit.score:.6f}")
    return EXIT_OK


def cmd_cluster(args) -> int:
    try:
        kb = load_kb(args.kb)
        manifest = load_manifest(args.manifest)
    except (OSError, KbSearchError) as exc:
        return _fail(EXIT_IO, f"cannot load inputs: {exc}")
    try:
        reduced = cluster_mod.pca_reduce(kb.matrix)
        assignment = cluster_mod.kmeans(reduced.points, k=args.k, seed=args.seed)
        records = cluster_mod.cluster_export(reduced, assignment, manifest)
    except KbSearchError as exc:
        return _fail(EXIT_VALIDATION, f"cluster failed: {exc}")
    csv_text = cluster_mod.export_to_csv(records)
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(csv_text)
        except OSError as exc:
            return _fail(EXIT_IO, f"cannot write output: {exc}")
        print(f"wrote {len(records)} records to {args.output}", file=sys.stderr)
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def cmd_stats(args) -> int:
    try:
        manifest = load_manifest(args.manifest)
    except FileNotFoundError as exc:
        return _fail(EXIT_IO, f"cannot read manifest: {exc}")
    except (ParseError, DuplicateId) as exc:
        return _fail(EXIT_VALIDATION, f"invalid manifest: {exc}")
    stats = compute_stats(manifest)
    if args.json:
        print(json.dumps({
            "total": stats.total,
            "by_image_kind": stats.by_image_kind,
            "by_language": stats.by_language,
            "by_disease": stats.by_disease,
        }))
    else:
        print(f"total\t{stats.total}")
        for facet, counts in (("image_kind", stats.by_image_kind),
                              ("language", stats.by_language),
                              ("disease", stats.by_disease)):
            for value, count in counts.items():
                print(f"{facet}:{value}\t{count}")
    return EXIT_OK


def cmd_validate(args) -> int:
    violations = []
    try:
        load_manifest(args.manifest)
    except FileNotFoundError as exc:
        return _fail(EXIT_IO, f"cannot read manifest: {exc}")
    except (ParseError, DuplicateId) as exc:
        violations.append(str(exc))
    if args.json:
        print(json.dumps({"valid": not violations, "violations": violations}))
    else:
        for v in violations:
            print(v)
    return EXIT_VALIDATION if violations else EXIT_OK


def cmd_serve(args) -> int:
    from .service import ServiceConfig, run

    try:
        config = ServiceConfig.from_file(args.config)
    except FileNotFoundError as exc:
        return _fail(EXIT_IO, f"cannot read config: {exc}")
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        return _fail(EXIT_VALIDATION, f"invalid config: {exc}")
    try:
        run(config)
    except (OSError, KbSearchError, ValueError) as exc:
        return _fail(EXIT_IO, f"serve failed: {exc}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kbsearch")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="embed a manifest into a KB file")
    p.add_argument("manifest")
    p.add_argument("--model", required=True)
    p.add_argument("--dim", type=int, default=8)
    p.add_argument("--pooling", choices=["mean", "flatten"], default="mean")
    p.add_argument("--stub", type=int, default=None, metavar="SEED")
    p.add_argument("--provider", default=None, metavar="URL")
    p.add_argument("--output", "-o", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("search", help="query a KB file")
    p.add_argument("kb")
    p.add_argument("query")
    p.add_argument("--stub", type=int, default=None, metavar="SEED")
    p.add_argument("--provider", default=None, metavar="URL")
    p.add_argument("-k", type=int, default=5)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("cluster", help="PCA + k-means export as CSV")
    p.add_argument("kb")
    p.add_argument("manifest")
    p.add_argument("-k", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("stats", help="facet counts for a manifest")
    p.add_argument("manifest")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("validate", help="check a manifest, print violations")
    p.add_argument("manifest")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("config")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command in ("build", "search"):
        if args.stub is None and args.provider is None:
            print("one of --stub or --provider is required", file=sys.stderr)
            return EXIT_VALIDATION
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
