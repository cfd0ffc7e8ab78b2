"""Universal type mapping: source types to target types with provenance."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

logger = logging.getLogger(__name__)

MAPPING_VERSION = "1"
PROVENANCES = ("application", "model_resolved", "manual", "manual_augmented")

# provenance ranks for merge precedence; higher wins on conflict
_RANK = {"model_resolved": 0, "application": 1, "manual": 2, "manual_augmented": 2}


@dataclass
class TypeEntry:
    source_type: str
    target_type: str
    provenance: str
    doc_excerpt: str = ""
    validated: bool = False

    def to_dict(self) -> dict:
        return {
            "source_type": self.source_type, "target_type": self.target_type,
            "provenance": self.provenance, "doc_excerpt": self.doc_excerpt,
            "validated": self.validated,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TypeEntry":
        return cls(**data)


@dataclass
class TypeMapping:
    entries: dict[str, TypeEntry] = field(default_factory=dict)
    version: str = MAPPING_VERSION

    def get(self, source_type: str) -> TypeEntry | None:
        return self.entries.get(source_type)

    def put(self, entry: TypeEntry) -> None:
        self.entries[entry.source_type] = entry

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "entries": {k: v.to_dict() for k, v in sorted(self.entries.items())},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TypeMapping":
        return cls(
            entries={k: TypeEntry.from_dict(v) for k, v in data["entries"].items()},
            version=data.get("version", MAPPING_VERSION),
        )


def save_mapping(mapping: TypeMapping, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(mapping.to_dict(), indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def load_mapping(path: str | Path) -> TypeMapping:
    return TypeMapping.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def merge_mapping(existing: TypeMapping, new_entries: list[TypeEntry]) -> TypeMapping:
    """Union of both; validated/manual entries in `existing` win over incoming
    model_resolved candidates, and conflicts are logged either way."""
    merged = TypeMapping(entries=dict(existing.entries), version=existing.version)
    for entry in new_entries:
        current = merged.get(entry.source_type)
        if current is None:
            merged.put(entry)
            continue
        if current.target_type == entry.target_type:
            continue
        keep_current = (_RANK[current.provenance], current.validated) >= \
            (_RANK[entry.provenance], entry.validated)
        logger.info("type mapping conflict for %s: keeping %s (%s), dropping %s (%s)",
                    entry.source_type,
                    current.target_type if keep_current else entry.target_type,
                    current.provenance if keep_current else entry.provenance,
                    entry.target_type if keep_current else current.target_type,
                    entry.provenance if keep_current else current.provenance)
        if not keep_current:
            merged.put(entry)
    return merged
