"""Source repository model: parsing, schema, call graph, coverage."""

from fragport.sourcemodel.coverage import collect_coverage
from fragport.sourcemodel.extract import build_index, parse_repository
from fragport.sourcemodel.model import (
    EXTERNAL, CallGraph, ClassRecord, Fragment, Schema, SourceRepo, fragment_id,
)
from fragport.sourcemodel.store import load_schema, save_schema, validate_schema

__all__ = [
    "EXTERNAL", "CallGraph", "ClassRecord", "Fragment", "Schema", "SourceRepo",
    "build_index", "collect_coverage", "fragment_id", "load_schema",
    "parse_repository", "save_schema", "validate_schema",
]
