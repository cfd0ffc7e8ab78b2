"""Type extraction, candidate validation, mapping merge and persistence."""

from __future__ import annotations

import pytest

from fragport.backend.prompt import PromptBundle
from fragport.typemap import (
    TypeEntry, TypeMapping, extract_types, load_mapping, load_seed_mapping,
    map_type_expr, merge_mapping, resolve_type, retrieve_doc, save_mapping,
    unresolved_types, validate_candidate,
)
from fragport.typemap.resolve import first_code_span, load_doc_corpus


class FakeBackend:
    """Minimal completion stub for resolve_type (duck-typed)."""

    def __init__(self, reply: str):
        self.reply = reply
        self.prompts: list[str] = []

    def complete(self, prompt, attempt: int = 0) -> str:
        self.prompts.append(prompt if isinstance(prompt, str) else prompt.render())
        return self.reply


class TestExtractTypes:
    def test_fixture_partition(self, prepared_schema):
        application, external = extract_types(prepared_schema)
        assert "minilib.core.Flag" in application
        assert "minilib.core.Lines.Buffer" in application
        assert all(t.startswith("minilib.") for t in application)
        assert {"int", "boolean", "char", "java.lang.String",
                "java.lang.Object", "java.util.ArrayList"} <= external
        assert not any(t.startswith("minilib.") for t in external)

    def test_self_contained_repo_has_no_external(self, tmp_path):
        from fragport.sourcemodel.extract import parse_repository
        from fragport.sourcemodel.model import SourceRepo

        root = tmp_path / "selfish"
        (root / "src/main").mkdir(parents=True)
        (root / "src/test").mkdir(parents=True)
        (root / "build.json").write_text(
            '{"source_dirs": ["src/main"], "test_dirs": ["src/test"]}')
        (root / "src/main/Node.java").write_text(
            "public class Node {\n"
            "    public Node next(Node other) { return other; }\n"
            "}\n")
        schema = parse_repository(SourceRepo.at(root))
        application, external = extract_types(schema)
        assert application == {"Node"}
        assert external == set()


class TestValidateCandidate:
    def test_builtin_type(self):
        assert validate_candidate("int") is True

    def test_import_is_prepended(self):
        assert validate_candidate("pathlib.Path") is True
        assert validate_candidate("typing.Union[bytearray, array.array, memoryview]") is True

    def test_hallucinated_source_type_fails(self):
        assert validate_candidate("java.util.ArrayList") is False

    def test_every_seed_entry_validates(self):
        seed = load_seed_mapping()
        for entry in seed.entries.values():
            assert validate_candidate(entry.target_type), entry.source_type

    @pytest.mark.parametrize("bad", [
        "java.util.ArrayList", "NotAType", "List<String>", "int[",
        "typing.Lsit[int]", "os.NoSuchThing", "class", "1nvalid",
        "string", "java.lang.String",
    ])
    def test_deliberately_invalid_candidates_fail(self, bad):
        assert validate_candidate(bad) is False


class TestResolveType:
    def test_candidate_from_first_fenced_span(self):
        reply = "Sure.\n```python\npathlib.Path\n```\nAlso maybe:\n```\nstr\n```"
        assert first_code_span(reply) == "pathlib.Path"
        backend = FakeBackend(reply)
        doc = retrieve_doc("java.io.File", load_doc_corpus())
        assert "filesystem" in doc or "files" in doc
        assert resolve_type("java.io.File", doc, backend) == "pathlib.Path"
        assert "java.io.File" in backend.prompts[0]

    def test_doc_retrieval_by_simple_name(self):
        corpus = load_doc_corpus()
        assert retrieve_doc("ArrayList", corpus) == corpus["java.util.ArrayList"]


class TestMergeMapping:
    def test_disjoint_union(self):
        base = TypeMapping(entries={"a": TypeEntry("a", "int", "manual", validated=True)})
        merged = merge_mapping(base, [TypeEntry("b", "str", "model_resolved")])
        assert set(merged.entries) == {"a", "b"}

    def test_manual_wins_over_model(self):
        base = TypeMapping(entries={
            "java.io.File": TypeEntry("java.io.File", "pathlib.Path", "manual", validated=True)})
        merged = merge_mapping(base, [TypeEntry("java.io.File", "str", "model_resolved")])
        assert merged.entries["java.io.File"].target_type == "pathlib.Path"

    def test_model_candidate_replaces_nothing_better(self):
        base = TypeMapping(entries={
            "x": TypeEntry("x", "str", "model_resolved", validated=False)})
        merged = merge_mapping(base, [TypeEntry("x", "int", "manual", validated=True)])
        assert merged.entries["x"].target_type == "int"

    def test_seed_merge_preserves_count(self):
        seed = load_seed_mapping()
        merged = merge_mapping(TypeMapping(), list(seed.entries.values()))
        assert len(merged.entries) == len(seed.entries)


class TestMappingPersistence:
    def test_round_trip(self, tmp_path):
        seed = load_seed_mapping()
        path = tmp_path / "mapping.json"
        save_mapping(seed, path)
        loaded = load_mapping(path)
        assert loaded.to_dict() == seed.to_dict()


class TestTypeExpressions:
    def test_generics_and_arrays(self):
        seed = load_seed_mapping()
        assert map_type_expr("ArrayList<String>", seed) == "typing.List[str]"
        assert map_type_expr("Map<String, Integer>", seed) == "typing.Dict[str, int]"
        assert map_type_expr("int[]", seed) == "typing.List[int]"

    def test_wildcard_maps_to_any_with_warning(self):
        seed = load_seed_mapping()
        warnings: list[str] = []
        assert map_type_expr("ArrayList<?>", seed, warnings) == "typing.List[typing.Any]"
        assert warnings

    def test_unknown_base_returns_none(self):
        assert map_type_expr("org.exotic.Widget", load_seed_mapping()) is None

    def test_unresolved_types_reported(self, prepared_schema):
        bare = TypeMapping()
        missing = unresolved_types(prepared_schema, bare)
        assert "java.lang.String" in missing
        seeded = load_seed_mapping()
        assert unresolved_types(prepared_schema, seeded) == []


class TestValidationPurity:
    def test_validate_candidate_is_idempotent_and_leaves_repo_alone(self, tmp_path):
        from conftest import MINIREPO

        before = sorted((p, p.stat().st_mtime_ns) for p in MINIREPO.rglob("*") if p.is_file())
        first = validate_candidate("typing.List[int]")
        second = validate_candidate("typing.List[int]")
        after = sorted((p, p.stat().st_mtime_ns) for p in MINIREPO.rglob("*") if p.is_file())
        assert first is True and second is True
        assert before == after
