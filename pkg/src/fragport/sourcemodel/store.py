"""Schema persistence: versioned JSON with stable key order."""

from __future__ import annotations

import json
from pathlib import Path

from fragport.errors import CorruptSchema, VersionMismatch
from fragport.sourcemodel.model import EXTERNAL, SCHEMA_VERSION, Schema


def save_schema(schema: Schema, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(schema.to_dict(), indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def load_schema(path: str | Path) -> Schema:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CorruptSchema(f"cannot read schema at {path}: {exc}")
    version = data.get("version")
    if version != SCHEMA_VERSION:
        raise VersionMismatch(f"schema version {version!r}, supported {SCHEMA_VERSION!r}")
    try:
        schema = Schema.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptSchema(f"malformed schema: {exc}")
    validate_schema(schema)
    return schema


def validate_schema(schema: Schema) -> None:
    ids = [f.id for f in schema.fragments]
    id_set = set(ids)
    if len(ids) != len(id_set):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise CorruptSchema(f"duplicate fragment ids: {dupes}")
    known = id_set | {EXTERNAL}
    for frag in schema.fragments:
        start, end = frag.location
        if start > end:
            raise CorruptSchema(f"fragment {frag.id} has inverted location")
        for callee in frag.callees:
            if callee not in known:
                raise CorruptSchema(f"fragment {frag.id} has dangling callee {callee}")
        for caller in frag.callers:
            if caller not in known:
                raise CorruptSchema(f"fragment {frag.id} has dangling caller {caller}")
    for a, b in schema.call_graph.edges:
        if a not in known or b not in known:
            raise CorruptSchema(f"call edge ({a}, {b}) has endpoint outside the schema")
    if not schema.call_graph.back_edges <= schema.call_graph.edges:
        raise CorruptSchema("back_edges is not a subset of edges")
    class_names = {c.qualified_name for c in schema.classes}
    for record in schema.classes:
        if record.kind == "inner" and not record.enclosing_class:
            raise CorruptSchema(f"inner class {record.qualified_name} lacks enclosing_class")
    for frag in schema.fragments:
        if frag.class_qname not in class_names:
            raise CorruptSchema(f"fragment {frag.id} names unknown class {frag.class_qname}")
