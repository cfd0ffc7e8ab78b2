"""Semantics-preserving removal of method and constructor overloading."""

from __future__ import annotations

import json
from pathlib import Path

from fragport.sourcemodel.extract import build_index, parse_repository
from fragport.sourcemodel.model import SourceRepo
from fragport.transform.overloads import (
    OverloadGroup, classify_constructor_pattern, find_overload_groups,
)
from fragport.transform.plan import Edit, RewritePlan, apply_plan, plan_transform
from fragport.transform.verify import VerificationReport, verify_transformation

__all__ = [
    "Edit", "OverloadGroup", "RewritePlan", "VerificationReport", "apply_plan",
    "classify_constructor_pattern", "find_overload_groups", "plan_transform",
    "run_transform", "verify_transformation",
]


def run_transform(repo: SourceRepo, out_root: str | Path) -> RewritePlan:
    """Plans, applies and records the transform; emits rename_map.json alongside.

    The rename map keys old fragment ids to new fragment ids by re-parsing the
    transformed tree (ids are content-addressed, so they exist only after the
    rewrite lands on disk).
    """
    out_root = Path(out_root)
    index = build_index(repo)
    plan = plan_transform(index)
    apply_plan(repo.root_path, out_root, plan, index)

    old_schema = parse_repository(repo)
    new_schema = parse_repository(SourceRepo.at(out_root))
    new_by_sig = new_schema.by_qualified_signature()
    id_map: dict[str, str] = {}
    for frag in old_schema.fragments:
        new_sig = plan.new_signatures.get(frag.qualified_signature, frag.qualified_signature)
        target = new_by_sig.get(new_sig)
        if target is not None:
            id_map[frag.id] = target.id
    (out_root / "rename_map.json").write_text(json.dumps({
        "signatures": dict(sorted(plan.new_signatures.items())),
        "fragment_ids": dict(sorted(id_map.items())),
        "constructor_ids": dict(sorted(plan.id_parameter_values.items())),
    }, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return plan
