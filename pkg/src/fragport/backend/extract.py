"""Pulling translated code out of a raw completion."""

from __future__ import annotations

import ast
import re
import textwrap

from fragport.errors import NoCode

_FENCE = re.compile(r"```(?:[a-zA-Z0-9_+-]*)\n?(.*?)```", re.DOTALL)


def normalize_code(code: str) -> str:
    """Canonical whitespace pass: dedent, strip trailing space, one final newline."""
    body = textwrap.dedent(code).strip("\n")
    lines = [line.rstrip() for line in body.splitlines()]
    return "\n".join(lines) + "\n"


def extract_code(completion: str) -> str:
    """First fenced code block, else the whole text when it already parses.

    Prose-only completions raise NoCode; syntactic validity of the extracted
    code is the caller's gate (the result here may still be unparseable).
    """
    if not completion or not completion.strip():
        raise NoCode("empty completion")
    match = _FENCE.search(completion)
    if match is not None:
        code = match.group(1)
        if not code.strip():
            raise NoCode("empty fenced code block")
        return normalize_code(code)
    text = completion.strip()
    try:
        ast.parse(textwrap.dedent(text))
    except SyntaxError:
        raise NoCode("completion contains no code block and is not parseable")
    return normalize_code(text)


def is_parseable(code: str) -> bool:
    try:
        ast.parse(code)
        return True
    except SyntaxError:
        return False
