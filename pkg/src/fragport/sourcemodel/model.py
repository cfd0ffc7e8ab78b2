"""Static model of a source repository: classes, fragments, call graph, coverage.

The schema is the hand-off artifact between every pipeline stage. It must
round-trip losslessly through JSON (stable key order) and stay internally
closed: every call edge endpoint is a known fragment id or the external
sentinel.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

SCHEMA_VERSION = "1"
EXTERNAL = "__external__"

FRAGMENT_KINDS = ("field", "application_method", "test_method")
CLASS_KINDS = ("concrete", "abstract", "interface", "inner")


@dataclass
class SourceRepo:
    root_path: Path
    build_descriptor: Path
    source_language_id: str = "java"
    test_framework_id: str = "junit4"

    @classmethod
    def at(cls, root: str | Path) -> "SourceRepo":
        root = Path(root)
        return cls(root_path=root, build_descriptor=root / "build.json")


@dataclass
class ClassRecord:
    qualified_name: str
    file_path: str                      # repo-relative
    kind: str                           # concrete | abstract | interface | inner
    supertypes: list[str]
    imports: list[str]
    enclosing_class: str | None = None
    origin: str = "app"                 # app | test

    def to_dict(self) -> dict:
        return {
            "qualified_name": self.qualified_name,
            "file_path": self.file_path,
            "kind": self.kind,
            "supertypes": self.supertypes,
            "imports": self.imports,
            "enclosing_class": self.enclosing_class,
            "origin": self.origin,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ClassRecord":
        return cls(**data)


@dataclass
class Fragment:
    id: str
    kind: str                           # field | application_method | test_method
    class_qname: str
    name: str
    signature: str                      # e.g. "clamp(int)" or field name
    file_path: str
    location: tuple[int, int]           # (start line, end line), 1-based inclusive
    code: str
    callers: set[str] = field(default_factory=set)
    callees: set[str] = field(default_factory=set)
    param_types: list[str] = field(default_factory=list)
    return_type: str | None = None
    annotations: list[str] = field(default_factory=list)
    modifiers: list[str] = field(default_factory=list)
    is_constructor: bool = False
    is_abstract: bool = False
    external_apis: list[str] = field(default_factory=list)

    @property
    def qualified_signature(self) -> str:
        return f"{self.class_qname}#{self.signature}"

    @property
    def is_static(self) -> bool:
        return "static" in self.modifiers

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "class_qname": self.class_qname,
            "name": self.name,
            "signature": self.signature,
            "file_path": self.file_path,
            "location": list(self.location),
            "code": self.code,
            "callers": sorted(self.callers),
            "callees": sorted(self.callees),
            "param_types": self.param_types,
            "return_type": self.return_type,
            "annotations": self.annotations,
            "modifiers": self.modifiers,
            "is_constructor": self.is_constructor,
            "is_abstract": self.is_abstract,
            "external_apis": self.external_apis,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Fragment":
        data = dict(data)
        data["location"] = tuple(data["location"])
        data["callers"] = set(data["callers"])
        data["callees"] = set(data["callees"])
        return cls(**data)


@dataclass
class CallGraph:
    edges: set[tuple[str, str]] = field(default_factory=set)
    back_edges: set[tuple[str, str]] = field(default_factory=set)

    def to_dict(self) -> dict:
        return {
            "edges": sorted([list(e) for e in self.edges]),
            "back_edges": sorted([list(e) for e in self.back_edges]),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CallGraph":
        return cls(
            edges={(a, b) for a, b in data["edges"]},
            back_edges={(a, b) for a, b in data["back_edges"]},
        )


@dataclass
class Schema:
    classes: list[ClassRecord]
    fragments: list[Fragment]
    call_graph: CallGraph
    coverage: dict[str, int] = field(default_factory=dict)
    coverage_by_test: dict[str, list[str]] = field(default_factory=dict)
    test_chains: list[dict] = field(default_factory=list)
    version: str = SCHEMA_VERSION

    def fragment_by_id(self, fragment_id: str) -> Fragment:
        return self._index()[fragment_id]

    def _index(self) -> dict[str, Fragment]:
        cached = getattr(self, "_frag_index", None)
        if cached is None or len(cached) != len(self.fragments):
            cached = {f.id: f for f in self.fragments}
            object.__setattr__(self, "_frag_index", cached)
        return cached

    def fragments_of_kind(self, *kinds: str) -> list[Fragment]:
        return [f for f in self.fragments if f.kind in kinds]

    def by_qualified_signature(self) -> dict[str, Fragment]:
        return {f.qualified_signature: f for f in self.fragments}

    def class_by_name(self, qualified_name: str) -> ClassRecord:
        for record in self.classes:
            if record.qualified_name == qualified_name:
                return record
        raise KeyError(qualified_name)

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "classes": [c.to_dict() for c in self.classes],
            "fragments": [f.to_dict() for f in self.fragments],
            "call_graph": self.call_graph.to_dict(),
            "coverage": dict(sorted(self.coverage.items())),
            "coverage_by_test": {k: sorted(v) for k, v in sorted(self.coverage_by_test.items())},
            "test_chains": self.test_chains,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Schema":
        return cls(
            classes=[ClassRecord.from_dict(c) for c in data["classes"]],
            fragments=[Fragment.from_dict(f) for f in data["fragments"]],
            call_graph=CallGraph.from_dict(data["call_graph"]),
            coverage=dict(data.get("coverage", {})),
            coverage_by_test={k: list(v) for k, v in data.get("coverage_by_test", {}).items()},
            test_chains=list(data.get("test_chains", [])),
            version=data["version"],
        )


def normalized_code(code: str) -> str:
    return "\n".join(line.strip() for line in code.splitlines() if line.strip())


def fragment_id(qualified_signature: str, code: str) -> str:
    digest = hashlib.sha1(normalized_code(code).encode("utf-8")).hexdigest()[:8]
    return f"{qualified_signature}@{digest}"
