"""Skeleton validation: byte-parse plus import in a fresh interpreter."""

from __future__ import annotations

import ast
import re
import subprocess
import sys
from pathlib import Path


def module_name_of(root: Path, path: Path) -> str:
    rel = path.relative_to(root).with_suffix("")
    return ".".join(rel.parts)


def list_modules(root: str | Path) -> list[Path]:
    root = Path(root)
    return sorted(p for p in root.rglob("*.py") if p.name != "__init__.py")


def validate_module(root: Path, path: Path, timeout: int = 60) -> tuple[bool, str]:
    try:
        ast.parse(path.read_bytes())
    except SyntaxError as exc:
        return False, f"syntax: {exc}"
    module = module_name_of(root, path)
    proc = subprocess.run(
        [sys.executable, "-c", f"import importlib; importlib.import_module({module!r})"],
        capture_output=True, text=True, timeout=timeout,
        cwd=root, env=_env_with_path(root),
    )
    if proc.returncode != 0:
        return False, proc.stderr.strip().splitlines()[-1] if proc.stderr.strip() else "import failed"
    return True, ""


def _env_with_path(root: Path) -> dict:
    import os

    env = dict(os.environ)
    env["PYTHONPATH"] = str(root) + os.pathsep + env.get("PYTHONPATH", "")
    return env


def _module_imports(path: Path) -> set[str]:
    found = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        match = re.match(r"\s*from ([A-Za-z_][\w.]*) import ", line)
        if match:
            found.add(match.group(1))
    return found


def validate_skeleton(root: str | Path, repair: bool = False) -> dict[str, bool]:
    """Per-module pass/fail.

    With repair=True, root-cause failures (modules that do not import another
    failing module) are removed and their dependents neutralized; dependents
    that only failed transitively are then re-validated. Removed modules stay
    recorded as failing.
    """
    root = Path(root)

    def sweep() -> dict[str, bool]:
        out: dict[str, bool] = {}
        for path in list_modules(root):
            ok, _ = validate_module(root, path)
            out[module_name_of(root, path)] = ok
        return out

    status = sweep()
    if not repair:
        return status
    removed: set[str] = set()
    while True:
        failing = {m for m, ok in status.items() if not ok}
        if not failing:
            break
        paths = {module_name_of(root, p): p for p in list_modules(root)}
        roots = [m for m in sorted(failing)
                 if not (_module_imports(paths[m]) & (failing - {m}))]
        if not roots:
            roots = sorted(failing)
        for module in roots:
            remove_module_with_repair(root, paths[module])
            removed.add(module)
        status = sweep()
        status.update({m: False for m in removed})
        if set(roots) <= removed and not ({m for m, ok in status.items() if not ok} - removed):
            break
    status.update({m: False for m in removed})
    return status


def remove_module_with_repair(root: Path, path: Path) -> list[Path]:
    """Drops a failing module and neutralizes dependent imports.

    `from <mod> import A, B` in dependents becomes `A = None` / `B = None` so
    they still import; anything actually calling the dropped class fails at
    runtime, which is the documented degradation.
    """
    module = module_name_of(root, path)
    pattern = re.compile(rf"^(\s*)from {re.escape(module)} import (.+)$", re.MULTILINE)
    touched = []
    for other in list_modules(root):
        if other == path:
            continue
        text = other.read_text(encoding="utf-8")

        def substitute(match: re.Match) -> str:
            indent = match.group(1)
            names = [n.strip() for n in match.group(2).split(",")]
            return "\n".join(f"{indent}{n} = None" for n in names)

        new_text = pattern.sub(substitute, text)
        if new_text != text:
            other.write_text(new_text, encoding="utf-8")
            touched.append(other)
    path.unlink()
    return touched
