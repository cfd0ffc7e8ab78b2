"""Rendering the skeleton project to disk plus the stub manifest.

The manifest maps fragment ids to (file, stub line range, indent, per-method
local import lines); insert_fragment keeps it current as line numbers shift.
"""

from __future__ import annotations

import json
from pathlib import Path

from fragport.skeleton.build import ModulePlan, SkeletonProject, TestModulePlan

MANIFEST_NAME = "skeleton_manifest.json"


def render_module(plan: ModulePlan, manifest: dict, root_package_depth: int = 0) -> str:
    lines: list[str] = []
    if plan.needs_abc:
        lines.append("import abc")
    if plan.needs_typing:
        lines.append("import typing")
    if lines:
        lines.append("")
    for target in sorted(plan.imports):
        names = ", ".join(sorted(plan.imports[target]))
        lines.append(f"from {target} import {names}")
    if plan.imports:
        lines.append("")
    if lines and lines[-1] != "":
        lines.append("")

    aliases: list[str] = []
    for cls in plan.classes:
        bases = f"({', '.join(cls.base_classes)})" if cls.base_classes else ""
        lines.append(f"class {cls.name}{bases}:")
        body_start = len(lines)
        for fstub in cls.field_stubs:
            lines.append(f"    {fstub.render()}")
            manifest[fstub.fragment_id] = {
                "file": plan.path, "start_line": len(lines), "end_line": len(lines),
                "indent": 4, "kind": "field", "local_imports": [],
            }
        if cls.field_stubs and cls.method_stubs:
            lines.append("")
        for i, mstub in enumerate(cls.method_stubs):
            if i > 0:
                lines.append("")
            if mstub.is_static:
                lines.append("    @staticmethod")
            if mstub.is_abstract:
                lines.append("    @abc.abstractmethod")
            start = len(lines) + 1
            lines.append(f"    {mstub.signature_line()}")
            lines.append("        pass")
            manifest[mstub.fragment_id] = {
                "file": plan.path, "start_line": start, "end_line": len(lines),
                "indent": 4, "kind": "method", "local_imports": list(mstub.local_imports),
            }
        if len(lines) == body_start:
            lines.append("    pass")
        lines.append("")
        lines.append("")
        if cls.alias_on:
            aliases.append(f"{cls.alias_on}.{cls.name} = {cls.name}")
    for alias in aliases:
        lines.append(alias)
    while lines and lines[-1] == "":
        lines.pop()
    return "\n".join(lines) + "\n"


def render_test_module(plan: TestModulePlan, manifest: dict) -> str:
    lines: list[str] = ["import unittest"]
    if plan.imports:
        lines.append("")
    for target in sorted(plan.imports):
        names = ", ".join(sorted(plan.imports[target]))
        lines.append(f"from {target} import {names}")
    lines.append("")
    lines.append("")
    lines.append(f"class {plan.class_name}(unittest.TestCase):")
    for fstub in plan.field_stubs:
        lines.append(f"    {fstub.render()}")
        manifest[fstub.fragment_id] = {
            "file": plan.path, "start_line": len(lines), "end_line": len(lines),
            "indent": 4, "kind": "field", "local_imports": [],
        }
    stubs = ([plan.setup_stub] if plan.setup_stub else []) + plan.stubs
    for i, stub in enumerate(stubs):
        if i > 0:
            lines.append("")
        start = len(lines) + 1
        lines.append(f"    {stub.signature_line()}")
        lines.append("        pass")
        manifest[stub.fragment_id] = {
            "file": plan.path, "start_line": start, "end_line": len(lines),
            "indent": 4, "kind": "method", "local_imports": list(stub.local_imports),
        }
    if not stubs and not plan.field_stubs:
        lines.append("    pass")
    return "\n".join(lines) + "\n"


def emit_skeleton(project: SkeletonProject, root: str | Path) -> Path:
    """Writes the package tree, test tree, and manifest under `root`."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    manifest: dict = {}
    packages: set[Path] = set()
    for plan in project.modules.values():
        path = root / plan.path
        path.parent.mkdir(parents=True, exist_ok=True)
        packages.update(path.parents)
        path.write_text(render_module(plan, manifest), encoding="utf-8")
    for plan in project.test_modules.values():
        path = root / plan.path
        path.parent.mkdir(parents=True, exist_ok=True)
        packages.update(path.parents)
        path.write_text(render_test_module(plan, manifest), encoding="utf-8")
    for pkg in packages:
        if pkg == root or root not in pkg.parents and pkg != root:
            if root not in pkg.parents:
                continue
        init = pkg / "__init__.py"
        if not init.exists():
            init.write_text("", encoding="utf-8")
    (root / MANIFEST_NAME).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return root


def load_manifest(root: str | Path) -> dict:
    return json.loads((Path(root) / MANIFEST_NAME).read_text(encoding="utf-8"))


def save_manifest(root: str | Path, manifest: dict) -> None:
    (Path(root) / MANIFEST_NAME).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
