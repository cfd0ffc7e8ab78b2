"""Candidate validation: does a target-type expression annotate cleanly?

A minimal script using the candidate as an annotation is written to a temp
directory and executed in a fresh interpreter; imports are deduced from the
dotted prefixes in the expression. Idempotent, no repository side effects.
"""

from __future__ import annotations

import re
import subprocess
import sys
import tempfile
from pathlib import Path

from fragport.errors import SandboxError

_BUILTIN_NO_IMPORT = {"int", "float", "str", "bool", "bytes", "bytearray", "memoryview",
                      "list", "dict", "set", "tuple", "object", "None", "Exception",
                      "ValueError", "RuntimeError", "TypeError", "KeyError", "IndexError"}


def imports_for(candidate: str) -> list[str]:
    modules: list[str] = []
    for token in re.findall(r"[A-Za-z_][A-Za-z0-9_.]*", candidate):
        root = token.split(".")[0]
        if "." in token and root not in _BUILTIN_NO_IMPORT and root not in modules:
            modules.append(root)
    return modules


def validation_script(candidate: str) -> str:
    lines = [f"import {m}" for m in imports_for(candidate)]
    lines.append(f"value: {candidate} = None")
    lines.append(f"def probe(arg: {candidate}) -> {candidate}:")
    lines.append("    return arg")
    lines.append("")
    return "\n".join(lines)


def validate_candidate(candidate: str, timeout: int = 30) -> bool:
    if not candidate or not candidate.strip():
        return False
    script = validation_script(candidate.strip())
    with tempfile.TemporaryDirectory(prefix="fragport-typecheck-") as tmp:
        path = Path(tmp) / "annotation_probe.py"
        path.write_text(script, encoding="utf-8")
        try:
            proc = subprocess.run([sys.executable, str(path)], capture_output=True,
                                  text=True, timeout=timeout)
        except FileNotFoundError as exc:
            raise SandboxError(f"target interpreter unavailable: {exc}")
        return proc.returncode == 0
