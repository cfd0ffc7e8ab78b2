"""End-to-end stage wiring over a work directory.

Stage artifacts live under one work dir:

    work/
      transformed/            rewritten source tree + rename_map.json
      schema.json             schema of the transformed tree (+ chains, coverage)
      type_mapping.json       universal type mapping used for the skeleton
      skeleton/               target project (+ skeleton_manifest.json)
      order.json              translation order + removed back edges
      journal.jsonl           translation progress journal
"""

from __future__ import annotations

import json
from pathlib import Path

from fragport.backend.backends import Backend
from fragport.backend.icl import ICLPool
from fragport.decompose.order import TranslationOrder, order_fragments
from fragport.decompose.testchain import TestFragmentChain, decompose_all
from fragport.orchestrator.budget import BudgetPolicy
from fragport.orchestrator.isolation import AbsentIsolation, IsolationClient, ProcessIsolation
from fragport.orchestrator.journal import Journal
from fragport.orchestrator.loop import Orchestrator
from fragport.skeleton.build import build_skeleton
from fragport.skeleton.emit import emit_skeleton
from fragport.skeleton.imports import resolve_circular_imports
from fragport.skeleton.validate import validate_skeleton
from fragport.sourcemodel.coverage import collect_coverage
from fragport.sourcemodel.extract import parse_repository
from fragport.sourcemodel.model import Schema, SourceRepo
from fragport.sourcemodel.store import load_schema, save_schema
from fragport.transform import run_transform, verify_transformation
from fragport.typemap.mapping import TypeMapping, load_mapping, save_mapping
from fragport.typemap.resolve import resolve_schema_types
from fragport.typemap import load_seed_mapping


class WorkDir:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    @property
    def transformed(self) -> Path:
        return self.root / "transformed"

    @property
    def schema_path(self) -> Path:
        return self.root / "schema.json"

    @property
    def mapping_path(self) -> Path:
        return self.root / "type_mapping.json"

    @property
    def skeleton_root(self) -> Path:
        return self.root / "skeleton"

    @property
    def order_path(self) -> Path:
        return self.root / "order.json"

    @property
    def journal_path(self) -> Path:
        return self.root / "journal.jsonl"


def stage_transform(repo: SourceRepo, work: WorkDir, verify: bool = True) -> dict:
    plan = run_transform(repo, work.transformed)
    report = {"edits": len(plan.edits), "verified": None}
    if verify:
        verdict = verify_transformation(repo, SourceRepo.at(work.transformed))
        report["verified"] = verdict.ok
        report["log"] = verdict.log
        if not verdict.ok:
            raise RuntimeError(f"transformation changed test outcomes:\n{verdict.log}")
    return report


def stage_analyze(work: WorkDir, with_coverage: bool = True) -> Schema:
    return stage_analyze_at(work, work.transformed, with_coverage=with_coverage)


def stage_analyze_at(work: WorkDir, repo_path: str | Path,
                     with_coverage: bool = True) -> Schema:
    repo = SourceRepo.at(repo_path)
    schema = parse_repository(repo)
    if with_coverage:
        schema = collect_coverage(repo, schema)
    save_schema(schema, work.schema_path)
    return schema


def stage_decompose(work: WorkDir) -> tuple[Schema, list[TestFragmentChain], TranslationOrder]:
    schema = load_schema(work.schema_path)
    repo = SourceRepo.at(work.transformed)
    chains = decompose_all(repo, schema)
    order = order_fragments(schema)
    save_schema(schema, work.schema_path)
    work.order_path.write_text(json.dumps({
        "sequence": order.sequence,
        "removed_back_edges": sorted([list(e) for e in order.removed_back_edges]),
    }, indent=2) + "\n", encoding="utf-8")
    return schema, chains, order


def load_order(work: WorkDir) -> TranslationOrder:
    data = json.loads(work.order_path.read_text(encoding="utf-8"))
    return TranslationOrder(sequence=data["sequence"],
                            removed_back_edges={tuple(e) for e in data["removed_back_edges"]})


def stage_typemap(work: WorkDir, backend: Backend | None = None,
                  seed_path: str | Path | None = None) -> TypeMapping:
    schema = load_schema(work.schema_path)
    seed = load_mapping(seed_path) if seed_path else load_seed_mapping()
    mapping = resolve_schema_types(schema, seed, backend=backend)
    save_mapping(mapping, work.mapping_path)
    return mapping


def stage_skeleton(work: WorkDir, repair: bool = False) -> dict[str, bool]:
    schema = load_schema(work.schema_path)
    mapping = load_mapping(work.mapping_path)
    project = build_skeleton(schema, mapping)
    project = resolve_circular_imports(project)
    emit_skeleton(project, work.skeleton_root)
    status = validate_skeleton(work.skeleton_root, repair=repair)
    (work.root / "skeleton_validation.json").write_text(
        json.dumps(status, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return status


def stage_translate(work: WorkDir, backend: Backend,
                    min_budget: int = 3, max_budget: int = 5, topk: int = 3,
                    isolation: IsolationClient | None = None,
                    isolation_command: str | None = None,
                    resume: bool = False, context_limit: int = 16384):
    schema = load_schema(work.schema_path)
    chains = [TestFragmentChain.from_dict(d) for d in schema.test_chains]
    order = load_order(work)
    policy = BudgetPolicy(min_budget=min_budget, max_budget=max_budget,
                          coverage_hits=dict(schema.coverage))
    if isolation is None:
        isolation = ProcessIsolation(isolation_command) if isolation_command \
            else AbsentIsolation()
    orchestrator = Orchestrator(
        schema=schema, chains=chains, order=order,
        skeleton_root=work.skeleton_root, backend=backend, policy=policy,
        journal=Journal(work.journal_path), topk=topk, isolation=isolation,
        icl_pool=ICLPool.load(), context_limit=context_limit,
        repo_root=work.transformed, resume=resume)
    try:
        return orchestrator.run()
    finally:
        isolation.close()


def run_pipeline(repo_path: str | Path, work_dir: str | Path, backend: Backend,
                 **translate_kwargs):
    """All stages in order; convenience for tests and the demo path."""
    repo = SourceRepo.at(repo_path)
    work = WorkDir(work_dir)
    stage_transform(repo, work)
    stage_analyze(work)
    stage_decompose(work)
    stage_typemap(work)
    stage_skeleton(work)
    return stage_translate(work, backend, **translate_kwargs)


def stage_report(work: WorkDir, out_dir: str | Path) -> Path:
    from fragport.report import emit_report

    schema = load_schema(work.schema_path)
    mapping = load_mapping(work.mapping_path) if work.mapping_path.is_file() else None
    return emit_report(Journal(work.journal_path), schema, out_dir, mapping=mapping)
