"""Retrieval-augmented type resolution and composite type-expression mapping.

Documentation excerpts come from a locally vendored corpus (deterministic, no
live network); the completion backend proposes a target type, the first
fenced code span is taken as the candidate, and the annotation-script check
decides whether it sticks.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from fragport.errors import EmptyCandidate
from fragport.typemap.extract import canonical_external, extract_types
from fragport.typemap.mapping import TypeEntry, TypeMapping, merge_mapping
from fragport.typemap.validate import validate_candidate

_DATA_PACKAGE = "fragport.data"
DOC_CORPUS_FILE = "type_docs.json"
PROMPT_TEMPLATE_FILE = "prompts/type_resolution.txt"


def _read_data(name: str) -> str:
    return resources.files(_DATA_PACKAGE).joinpath(name).read_text(encoding="utf-8")


def load_doc_corpus(path: str | Path | None = None) -> dict[str, str]:
    if path is not None:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    return json.loads(_read_data(DOC_CORPUS_FILE))


def retrieve_doc(source_type: str, corpus: dict[str, str]) -> str:
    if source_type in corpus:
        return corpus[source_type]
    simple = source_type.rsplit(".", 1)[-1]
    for key, text in corpus.items():
        if key.rsplit(".", 1)[-1] == simple:
            return text
    return ""


def type_resolution_prompt(source_type: str, doc_excerpt: str) -> str:
    template = _read_data(PROMPT_TEMPLATE_FILE)
    return template.format(source_type=source_type, doc_excerpt=doc_excerpt or "(no documentation found)")


_FENCE = re.compile(r"```(?:[a-zA-Z0-9_+-]*)\n?(.*?)```", re.DOTALL)


def first_code_span(completion: str) -> str | None:
    match = _FENCE.search(completion)
    if match is None:
        return None
    return match.group(1).strip()


def resolve_type(source_type: str, doc_excerpt: str, backend) -> str:
    """One candidate target-type expression from the completion backend."""
    prompt = type_resolution_prompt(source_type, doc_excerpt)
    completion = backend.complete(prompt)
    candidate = first_code_span(completion)
    if candidate is None:
        candidate = completion.strip().splitlines()[0].strip() if completion.strip() else ""
    if not candidate:
        raise EmptyCandidate(f"backend produced no candidate for {source_type}")
    return candidate


def resolve_schema_types(schema, mapping: TypeMapping, backend=None,
                         corpus: dict[str, str] | None = None) -> TypeMapping:
    """Application types map to their skeleton classes; unmapped externals go
    through the backend (when provided) and keep their validation verdict."""
    corpus = corpus if corpus is not None else load_doc_corpus()
    application, external = extract_types(schema)
    new_entries: list[TypeEntry] = []
    simple_counts: dict[str, int] = {}
    for qname in application:
        simple = qname.rsplit(".", 1)[-1]
        simple_counts[simple] = simple_counts.get(simple, 0) + 1
    for qname in sorted(application):
        simple = qname.rsplit(".", 1)[-1]
        new_entries.append(TypeEntry(
            source_type=qname,
            target_type=simple,
            provenance="application",
            validated=True,
        ))
        if simple_counts[simple] == 1 and simple != qname:
            # signatures reference application classes by simple name
            new_entries.append(TypeEntry(
                source_type=simple,
                target_type=simple,
                provenance="application",
                validated=True,
            ))
    if backend is not None:
        for source_type in sorted(external):
            canonical = canonical_external(source_type)
            if mapping.get(canonical) is not None:
                continue
            doc = retrieve_doc(canonical, corpus)
            try:
                candidate = resolve_type(canonical, doc, backend)
            except EmptyCandidate:
                continue
            new_entries.append(TypeEntry(
                source_type=canonical,
                target_type=candidate,
                provenance="model_resolved",
                doc_excerpt=doc,
                validated=validate_candidate(candidate),
            ))
    return merge_mapping(mapping, new_entries)


def unresolved_types(schema, mapping: TypeMapping) -> list[str]:
    """External types referenced by signatures with no validated mapping entry."""
    _, external = extract_types(schema)
    missing = []
    for source_type in sorted(external):
        entry = mapping.get(canonical_external(source_type))
        if entry is None or not entry.validated:
            missing.append(canonical_external(source_type))
    return missing


# -- composite type expressions -------------------------------------------

@dataclass
class _ParsedType:
    name: str
    args: list["_ParsedType"]
    dims: int


def _parse_type_expr(expr: str) -> _ParsedType:
    expr = expr.strip()
    dims = 0
    while expr.endswith("[]"):
        dims += 1
        expr = expr[:-2].strip()
    if "<" in expr and expr.endswith(">"):
        base, _, rest = expr.partition("<")
        inner = rest[:-1]
        args: list[str] = []
        depth = 0
        current = ""
        for ch in inner:
            if ch == "<":
                depth += 1
            elif ch == ">":
                depth -= 1
            if ch == "," and depth == 0:
                args.append(current)
                current = ""
            else:
                current += ch
        if current.strip():
            args.append(current)
        return _ParsedType(base.strip(), [_parse_type_expr(a) for a in args], dims)
    return _ParsedType(expr, [], dims)


def map_type_expr(expr: str, mapping: TypeMapping,
                  warnings: list[str] | None = None) -> str | None:
    """Target-language annotation for a (possibly generic/array) source type.

    Returns None when the base type has no mapping entry. Wildcards and raw
    type variables fall back to the dynamic any-equivalent with a warning.
    """
    parsed = _parse_type_expr(expr)
    return _map_parsed(parsed, mapping, warnings if warnings is not None else [])


def _map_parsed(parsed: _ParsedType, mapping: TypeMapping, warnings: list[str]) -> str | None:
    if parsed.name in ("?", "T", "E", "K", "V"):
        warnings.append(f"unresolvable generic {parsed.name!r} mapped to typing.Any")
        base = "typing.Any"
    else:
        if parsed.name == "void":
            base = "None"
        else:
            entry = mapping.get(canonical_external(parsed.name)) or mapping.get(parsed.name)
            if entry is None:
                return None
            base = entry.target_type
    text = base
    if parsed.args:
        mapped_args = []
        for arg in parsed.args:
            mapped = _map_parsed(arg, mapping, warnings)
            if mapped is None:
                return None
            mapped_args.append(mapped)
        text = f"{base}[{', '.join(mapped_args)}]"
    for _ in range(parsed.dims):
        text = f"typing.List[{text}]"
    return text
