"""Command-line entry point.

Subcommands mirror the pipeline stages:

    fragport analyze    parse the repo, collect coverage, write schema.json
    fragport transform  rewrite overloading away (verified by source tests)
    fragport decompose  test chains + translation order
    fragport typemap    build/extend the universal type mapping
    fragport skeleton   emit and validate the target skeleton
    fragport translate  run the translation-and-validation loop (--resume ok)
    fragport report     metrics + developer report bundle from the journal

Any stage failure exits non-zero with a one-line JSON error object on stderr;
configuration problems exit with code 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from fragport.config import RunConfig, load_config
from fragport.errors import ConfigError, FragportError


def _backend_from_config(config: RunConfig):
    from fragport.backend.backends import HttpChatBackend, MockStubBackend, ReplayCacheBackend

    if config.backend_kind == "replay":
        if config.cache_dir is None:
            raise ConfigError("replay backend requires backend.cache_dir")
        return ReplayCacheBackend(config.cache_dir, strict=config.strict_replay)
    if config.backend_kind == "http_chat":
        return HttpChatBackend(config.endpoint, config.model, config.api_key_env)
    return MockStubBackend()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fragport", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--config", help="INI config file")
    parser.add_argument("--repo", help="source repository root")
    parser.add_argument("--work", help="work directory for stage artifacts")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("analyze", help="parse repo and build the schema")
    sub.add_parser("transform", help="remove method/constructor overloading")
    sub.add_parser("decompose", help="order fragments and slice tests")
    p_typemap = sub.add_parser("typemap", help="build the universal type mapping")
    p_typemap.add_argument("--mapping", help="seed mapping JSON path")
    p_skel = sub.add_parser("skeleton", help="emit and validate the target skeleton")
    p_skel.add_argument("--repair", action="store_true",
                        help="drop failing modules and patch dependents")
    p_tr = sub.add_parser("translate", help="run the main translation loop")
    p_tr.add_argument("--backend", choices=["replay", "http_chat", "mock"])
    p_tr.add_argument("--cache-dir", help="replay cache directory")
    p_tr.add_argument("--strict-replay", action="store_true")
    p_tr.add_argument("--min-budget", type=int)
    p_tr.add_argument("--max-budget", type=int)
    p_tr.add_argument("--topk", type=int)
    p_tr.add_argument("--resume", action="store_true")
    p_tr.add_argument("--isolation-command", help="harness command (NDJSON over stdio)")
    p_rep = sub.add_parser("report", help="emit metrics and the report bundle")
    p_rep.add_argument("--out", help="report output directory")
    return parser


def _apply_overrides(config: RunConfig, args: argparse.Namespace) -> RunConfig:
    if args.repo:
        config.repo = Path(args.repo)
    if args.work:
        config.work = Path(args.work)
    if getattr(args, "backend", None):
        config.backend_kind = args.backend
    if getattr(args, "cache_dir", None):
        config.cache_dir = Path(args.cache_dir)
    if getattr(args, "strict_replay", False):
        config.strict_replay = True
    if getattr(args, "min_budget", None) is not None:
        config.min_budget = args.min_budget
    if getattr(args, "max_budget", None) is not None:
        config.max_budget = args.max_budget
    if getattr(args, "topk", None) is not None:
        config.topk = args.topk
    if getattr(args, "isolation_command", None):
        config.isolation_command = args.isolation_command
        config.isolation_enabled = True
    return config


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    from fragport import pipeline
    from fragport.sourcemodel.model import SourceRepo

    try:
        config = _apply_overrides(load_config(args.config), args)
        # analyze falls back to the work dir's transformed tree when present
        needs_repo = args.command == "transform" or (
            args.command == "analyze"
            and not (Path(config.work) / "transformed").is_dir())
        config.validate(require_repo=needs_repo)
        work = pipeline.WorkDir(config.work)

        if args.command == "transform":
            repo = SourceRepo(root_path=Path(config.repo),
                              build_descriptor=config.build_descriptor
                              or Path(config.repo) / "build.json")
            report = pipeline.stage_transform(repo, work)
            print(json.dumps({"stage": "transform", **report}))
        elif args.command == "analyze":
            # analyze works on the transformed tree when present, else the repo
            target = work.transformed if work.transformed.is_dir() else config.repo
            schema = pipeline.stage_analyze_at(work, target)
            print(json.dumps({"stage": "analyze", "classes": len(schema.classes),
                              "fragments": len(schema.fragments)}))
        elif args.command == "decompose":
            schema, chains, order = pipeline.stage_decompose(work)
            print(json.dumps({"stage": "decompose", "chains": len(chains),
                              "back_edges": len(order.removed_back_edges)}))
        elif args.command == "typemap":
            mapping = pipeline.stage_typemap(work, seed_path=getattr(args, "mapping", None))
            print(json.dumps({"stage": "typemap", "entries": len(mapping.entries)}))
        elif args.command == "skeleton":
            status = pipeline.stage_skeleton(work, repair=args.repair)
            print(json.dumps({"stage": "skeleton", "modules": len(status),
                              "failing": sorted(k for k, v in status.items() if not v)}))
        elif args.command == "translate":
            backend = _backend_from_config(config)
            tvos = pipeline.stage_translate(
                work, backend, min_budget=config.min_budget,
                max_budget=config.max_budget, topk=config.topk,
                isolation_command=(config.isolation_command
                                   if config.isolation_enabled else None),
                resume=args.resume, context_limit=config.context_limit)
            parseable = sum(1 for t in tvos.values() if t.syntax_outcome == "parseable")
            print(json.dumps({"stage": "translate", "fragments": len(tvos),
                              "parseable": parseable}))
        elif args.command == "report":
            out = Path(args.out) if args.out else work.root / "reports"
            path = pipeline.stage_report(work, out)
            print(json.dumps({"stage": "report", "out": str(path)}))
        return 0
    except ConfigError as exc:
        print(json.dumps({"error": "ConfigError", "message": str(exc),
                          "stage": args.command}), file=sys.stderr)
        return 2
    except FragportError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc),
                          "stage": args.command}), file=sys.stderr)
        return 1
    except Exception as exc:  # stage machinery failure
        print(json.dumps({"error": type(exc).__name__, "message": str(exc),
                          "stage": args.command}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
