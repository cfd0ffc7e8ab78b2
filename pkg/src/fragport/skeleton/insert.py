"""In-place stub replacement for translated fragments.

The edit touches only the stub's line range (manifest-tracked); the module
must still import afterwards or the file is rolled back. Re-inserting the
same code is byte-idempotent. Per-method local import lines recorded during
cycle resolution are re-injected into the translated body, since the
completion backend knows nothing about import demotion.
"""

from __future__ import annotations

import textwrap
from pathlib import Path

from fragport.errors import PostInsertImportFailure, StubNotFound
from fragport.skeleton.emit import load_manifest, save_manifest
from fragport.skeleton.validate import module_name_of, validate_module


def _prepare_block(code: str, indent: int, kind: str, local_imports: list[str]) -> list[str]:
    body = textwrap.dedent(code).strip("\n")
    lines = body.splitlines()
    if kind == "method" and local_imports:
        injected = []
        remaining = list(lines)
        # decorators and the def line stay on top; imports go right below
        while remaining and (remaining[0].lstrip().startswith("@")):
            injected.append(remaining.pop(0))
        if remaining:
            def_line = remaining.pop(0)
            injected.append(def_line)
            while remaining and not def_line.rstrip().endswith(":"):
                # multi-line signature: keep consuming until the colon closes
                def_line = remaining.pop(0)
                injected.append(def_line)
        injected.extend(f"    {imp}" for imp in local_imports)
        injected.extend(remaining)
        lines = injected
    pad = " " * indent
    return [pad + line if line.strip() else "" for line in lines]


def insert_fragment(root: str | Path, fragment_id: str, translated_code: str,
                    manifest: dict | None = None, verify_import: bool = True) -> dict:
    """Replaces the stub for fragment_id; returns the updated manifest."""
    root = Path(root)
    manifest = manifest if manifest is not None else load_manifest(root)
    entry = manifest.get(fragment_id)
    if entry is None:
        raise StubNotFound(f"no stub recorded for {fragment_id}")
    path = root / entry["file"]
    original = path.read_text(encoding="utf-8")
    lines = original.splitlines()
    start, end = entry["start_line"], entry["end_line"]
    if start < 1 or end > len(lines):
        raise StubNotFound(f"stub range {start}..{end} outside {entry['file']}")
    block = _prepare_block(translated_code, entry["indent"], entry["kind"],
                           entry.get("local_imports", []))
    new_lines = lines[:start - 1] + block + lines[end:]
    new_text = "\n".join(new_lines) + ("\n" if original.endswith("\n") else "")
    if new_text == original:
        return manifest
    path.write_text(new_text, encoding="utf-8")
    if verify_import:
        ok, detail = validate_module(root, path)
        if not ok:
            path.write_text(original, encoding="utf-8")
            raise PostInsertImportFailure(
                f"module {module_name_of(root, path)} broken after inserting "
                f"{fragment_id}; rolled back", log=detail)
    delta = len(block) - (end - start + 1)
    entry["end_line"] = start + len(block) - 1
    if delta:
        for other_id, other in manifest.items():
            if other_id == fragment_id or other["file"] != entry["file"]:
                continue
            if other["start_line"] > end:
                other["start_line"] += delta
                other["end_line"] += delta
    save_manifest(root, manifest)
    return manifest
