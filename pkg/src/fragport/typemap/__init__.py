"""Universal type mapping: extraction, resolution, validation, persistence."""

from importlib import resources

from fragport.typemap.extract import canonical_external, extract_types, split_type_expr
from fragport.typemap.mapping import (
    TypeEntry, TypeMapping, load_mapping, merge_mapping, save_mapping,
)
from fragport.typemap.resolve import (
    load_doc_corpus, map_type_expr, resolve_schema_types, resolve_type,
    retrieve_doc, unresolved_types,
)
from fragport.typemap.validate import validate_candidate, validation_script

__all__ = [
    "TypeEntry", "TypeMapping", "canonical_external", "extract_types",
    "load_doc_corpus", "load_mapping", "load_seed_mapping", "map_type_expr",
    "merge_mapping", "resolve_schema_types", "resolve_type", "retrieve_doc",
    "save_mapping", "split_type_expr", "unresolved_types", "validate_candidate",
    "validation_script",
]


def load_seed_mapping() -> TypeMapping:
    import json
    text = resources.files("fragport.data").joinpath("seed_type_mapping.json").read_text("utf-8")
    return TypeMapping.from_dict(json.loads(text))
