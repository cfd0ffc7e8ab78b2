"""Schema extraction against the hand-counted manifest, plus persistence."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from conftest import MANIFEST, MINIREPO

from fragport.errors import CorruptSchema, ParseError, VersionMismatch
from fragport.errors import TestRunFailure as SuiteFailure
from fragport.sourcemodel import (
    EXTERNAL, SourceRepo, collect_coverage, load_schema, parse_repository, save_schema,
)


@pytest.fixture(scope="module")
def schema():
    return parse_repository(SourceRepo.at(MINIREPO))


@pytest.fixture(scope="module")
def manifest():
    return json.loads(MANIFEST.read_text())


class TestParseRepository:
    def test_counts_match_hand_manifest(self, schema, manifest):
        assert len(schema.classes) == manifest["classes"]
        assert sorted(c.qualified_name for c in schema.classes) == manifest["class_names"]
        assert len(schema.fragments_of_kind("field")) == manifest["field_fragments"]
        assert len(schema.fragments_of_kind("application_method")) == \
            manifest["application_methods"]
        assert len(schema.fragments_of_kind("test_method")) == manifest["test_methods"]

    def test_call_edges_match_hand_manifest(self, schema, manifest):
        sig_of = {f.id: f.qualified_signature for f in schema.fragments}
        internal = sorted((sig_of[a], sig_of[b])
                          for a, b in schema.call_graph.edges if b != EXTERNAL)
        assert internal == sorted(tuple(e) for e in manifest["internal_edges"])

    def test_external_calls_collapse_to_sentinel(self, schema, manifest):
        sig_of = {f.id: f.qualified_signature for f in schema.fragments}
        ext = sorted(sig_of[a] for a, b in schema.call_graph.edges if b == EXTERNAL)
        assert ext == sorted(manifest["fragments_with_external_calls"])

    def test_graph_is_closed(self, schema):
        ids = {f.id for f in schema.fragments} | {EXTERNAL}
        for a, b in schema.call_graph.edges:
            assert a in ids and b in ids

    def test_fragment_code_matches_file_slice(self, schema):
        for frag in schema.fragments[:20]:
            text = (MINIREPO / frag.file_path).read_text().splitlines()
            start, end = frag.location
            assert frag.code == "\n".join(text[start - 1:end])

    def test_inner_class_marked(self, schema):
        record = schema.class_by_name("minilib.core.Lines.Buffer")
        assert record.kind == "inner"
        assert record.enclosing_class == "minilib.core.Lines"

    def test_empty_repo_rejected(self, tmp_path):
        (tmp_path / "build.json").write_text(
            '{"source_dirs": ["src"], "test_dirs": ["tests"]}')
        with pytest.raises(ParseError):
            parse_repository(SourceRepo.at(tmp_path))


class TestCoverage:
    def test_coverage_counts(self, schema):
        repo = SourceRepo.at(MINIREPO)
        covered = collect_coverage(repo, schema)
        ids = {f.qualified_signature: f.id for f in schema.fragments}
        # Tokens.width runs twice in one test plus inside none other
        assert covered.coverage[ids["minilib.core.Tokens#width(String)"]] == 2
        # countSep is called three times from the loop test
        assert covered.coverage[ids["minilib.core.Tokens#countSep(String,char)"]] == 3
        assert covered.coverage[ids["minilib.core.Tokens#pad(String,int)"]] == 0

    def test_reproducible_over_two_runs(self, schema):
        repo = SourceRepo.at(MINIREPO)
        first = dict(collect_coverage(repo, schema).coverage)
        second = dict(collect_coverage(repo, schema).coverage)
        assert first == second

    def test_red_suite_raises(self, tmp_path):
        root = tmp_path / "red"
        (root / "src/test").mkdir(parents=True)
        (root / "src/main").mkdir(parents=True)
        (root / "build.json").write_text(
            '{"source_dirs": ["src/main"], "test_dirs": ["src/test"]}')
        (root / "src/test" / "RedTest.java").write_text(
            "import org.junit.Test;\nimport static org.junit.Assert.*;\n"
            "public class RedTest {\n"
            "    @Test\n    public void fails() { assertTrue(false); }\n}\n")
        repo = SourceRepo.at(root)
        schema = parse_repository(repo)
        with pytest.raises(SuiteFailure):
            collect_coverage(repo, schema)


class TestPersistence:
    def test_round_trip_is_lossless(self, schema, tmp_path):
        path = tmp_path / "schema.json"
        save_schema(schema, path)
        loaded = load_schema(path)
        assert loaded.to_dict() == schema.to_dict()

    def test_future_version_rejected(self, schema, tmp_path):
        path = tmp_path / "schema.json"
        save_schema(schema, path)
        doc = json.loads(path.read_text())
        doc["version"] = "99"
        path.write_text(json.dumps(doc))
        with pytest.raises(VersionMismatch):
            load_schema(path)

    def test_dangling_callee_rejected(self, schema, tmp_path):
        path = tmp_path / "schema.json"
        save_schema(schema, path)
        doc = json.loads(path.read_text())
        doc["fragments"][0]["callees"] = ["minilib.core.Nowhere#gone()@deadbeef"]
        path.write_text(json.dumps(doc))
        with pytest.raises(CorruptSchema):
            load_schema(path)

    def test_garbage_file_rejected(self, tmp_path):
        path = tmp_path / "schema.json"
        path.write_text("{not json")
        with pytest.raises(CorruptSchema):
            load_schema(path)
