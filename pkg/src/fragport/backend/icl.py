"""In-context example selection.

Test fragments match on the assert kinds they use; application fragments
match on syntactic construct features. Selection is deterministic: matched
pool entries concatenate in sorted key order, with a generic fallback when
nothing matches.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

ASSERT_KINDS = ("assertEquals", "assertTrue", "assertFalse", "assertNull",
                "assertNotNull", "assertSame", "fail")

FEATURE_PATTERNS = {
    "loop": re.compile(r"\b(for|while)\s*\("),
    "conditional": re.compile(r"\bif\s*\("),
    "exception": re.compile(r"\b(try|throw|catch)\b"),
    "string_building": re.compile(r"\bStringBuilder\b|\.concat\("),
    "collections": re.compile(r"\bArrayList\b|\.add\(|\.get\(|\.size\("),
    "construction": re.compile(r"\bnew\s+[A-Z]"),
}


@dataclass
class ICLPool:
    assert_examples: dict[str, str] = field(default_factory=dict)
    feature_examples: dict[str, str] = field(default_factory=dict)
    fallback: str = ""

    @classmethod
    def load(cls, path: str | Path | None = None) -> "ICLPool":
        if path is not None:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        else:
            text = resources.files("fragport.data").joinpath("icl_pool.json") \
                .read_text(encoding="utf-8")
            data = json.loads(text)
        return cls(assert_examples=data.get("asserts", {}),
                   feature_examples=data.get("features", {}),
                   fallback=data.get("fallback", ""))

    def assert_kinds_in(self, code: str) -> list[str]:
        return sorted(kind for kind in ASSERT_KINDS
                      if re.search(rf"\b{kind}\s*\(", code))

    def features_in(self, code: str) -> list[str]:
        return sorted(name for name, pat in FEATURE_PATTERNS.items() if pat.search(code))

    def select(self, fragment) -> str:
        """One example text for the fragment; selection is a pure function of
        the fragment's code and kind."""
        if fragment.kind == "test_method":
            kinds = self.assert_kinds_in(fragment.code)
            matched = [self.assert_examples[k] for k in kinds if k in self.assert_examples]
            if matched:
                return "\n\n".join(dict.fromkeys(matched))
        else:
            features = self.features_in(fragment.code)
            matched = [self.feature_examples[f] for f in features if f in self.feature_examples]
            if matched:
                return "\n\n".join(dict.fromkeys(matched))
        return self.fallback


def select_icl(fragment, pool: ICLPool) -> str:
    return pool.select(fragment)
