"""Type inventory of a schema, partitioned into application and external."""

from __future__ import annotations

import re

from fragport.sourcemodel.model import Schema
from fragport.sourcemodel.typeindex import KNOWN_LIBRARY_QUALIFIED, PRIMITIVES

_EXCEPTION_QUALIFIED = {
    name: f"java.lang.{name}" for name in (
        "Throwable", "Exception", "RuntimeException", "IllegalArgumentException",
        "IllegalStateException", "NullPointerException", "ArithmeticException",
        "IndexOutOfBoundsException", "UnsupportedOperationException", "AssertionError",
    )
}


def split_type_expr(expr: str) -> list[str]:
    """Base type names mentioned in a rendered type expression.

    "ArrayList<String>" -> ["ArrayList", "String"]; "int[]" -> ["int"].
    """
    return re.findall(r"[A-Za-z_][A-Za-z0-9_.]*", expr)


def canonical_external(name: str) -> str:
    if name in PRIMITIVES or name == "void":
        return name
    if name in KNOWN_LIBRARY_QUALIFIED:
        return KNOWN_LIBRARY_QUALIFIED[name]
    if name in _EXCEPTION_QUALIFIED:
        return _EXCEPTION_QUALIFIED[name]
    return name


def extract_types(schema: Schema) -> tuple[set[str], set[str]]:
    """(application types, external types) referenced by fragment signatures
    and field declarations. Application types are repo classes by qualified
    name; everything else resolves to its canonical library name."""
    app_classes = {c.qualified_name for c in schema.classes}
    simple_to_qname: dict[str, list[str]] = {}
    for qname in app_classes:
        simple_to_qname.setdefault(qname.rsplit(".", 1)[-1], []).append(qname)

    application: set[str] = set()
    external: set[str] = set()
    for frag in schema.fragments:
        exprs = list(frag.param_types)
        if frag.return_type:
            exprs.append(frag.return_type)
        for expr in exprs:
            for name in split_type_expr(expr):
                if name in app_classes:
                    application.add(name)
                    continue
                qnames = simple_to_qname.get(name.rsplit(".", 1)[-1], [])
                if len(qnames) == 1:
                    application.add(qnames[0])
                elif qnames:
                    # ambiguous simple name: count every matching repo class
                    application.update(qnames)
                else:
                    external.add(canonical_external(name))
    external.discard("void")
    return application, external
