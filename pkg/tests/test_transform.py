"""Overload removal: renames, constructor patterns, behavior preservation."""

from __future__ import annotations

import textwrap
from pathlib import Path

import pytest

from conftest import MINIREPO

from fragport.errors import AmbiguousCallSite, UnsupportedChain
from fragport.execharness.source import run_source_suite
from fragport.javamini.parser import parse_source
from fragport.sourcemodel.extract import build_index, parse_repository
from fragport.sourcemodel.model import SourceRepo
from fragport.sourcemodel.typeindex import ClassIndex
from fragport.transform import (
    classify_constructor_pattern, find_overload_groups, plan_transform, run_transform,
    verify_transformation,
)
from fragport.transform.overloads import OverloadGroup


def index_of(source: str, file: str = "Demo.java") -> ClassIndex:
    unit = parse_source(textwrap.dedent(source), file)
    return ClassIndex([(unit, file, "app")])


def write_repo(tmp_path: Path, files: dict[str, str], tests: dict[str, str]) -> SourceRepo:
    (tmp_path / "src/main").mkdir(parents=True, exist_ok=True)
    (tmp_path / "src/test").mkdir(parents=True, exist_ok=True)
    (tmp_path / "build.json").write_text(
        '{"source_dirs": ["src/main"], "test_dirs": ["src/test"]}')
    for name, text in files.items():
        path = tmp_path / "src/main" / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(textwrap.dedent(text))
    for name, text in tests.items():
        path = tmp_path / "src/test" / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(textwrap.dedent(text))
    return SourceRepo.at(tmp_path)


class TestClassification:
    def _group(self, source: str) -> OverloadGroup:
        index = index_of(source)
        _, ctor_groups = find_overload_groups(index)
        return ctor_groups[0]

    def test_independent(self):
        group = self._group("""
            public class A {
                public A(int x) { int y = x; }
                public A(String s) { int y = 0; }
            }
        """)
        assert classify_constructor_pattern(group) == "independent"

    def test_pure_this_chain(self):
        group = self._group("""
            public class A {
                public A(int x, int y) { int z = x + y; }
                public A(int x) { this(x, 0); }
            }
        """)
        assert classify_constructor_pattern(group) == "pure_this_chain"

    def test_hybrid(self):
        group = self._group("""
            public class A {
                private boolean flag = false;
                public A(int x, int y) { int z = x + y; }
                public A(int x) {
                    this(x, 0);
                    flag = true;
                }
            }
        """)
        assert classify_constructor_pattern(group) == "hybrid"


class TestMethodRenames:
    def test_suffixes_follow_declaration_order(self):
        index = index_of("""
            public class A {
                public void put(String s) { int x = 0; }
                public void put(char c) { int x = 1; }
                public void put(int n) { int x = 2; }
            }
        """)
        plan = plan_transform(index)
        assert plan.new_signatures["A#put(String)"] == "A#put0(String)"
        assert plan.new_signatures["A#put(char)"] == "A#put1(char)"
        assert plan.new_signatures["A#put(int)"] == "A#put2(int)"

    def test_non_overloaded_class_yields_empty_plan(self):
        index = index_of("""
            public class A {
                public void put(String s) { int x = 0; }
                public void take(int n) { int x = 1; }
            }
        """)
        plan = plan_transform(index)
        assert plan.edits == [] and plan.new_signatures == {}

    def test_hierarchy_spanning_overload_aborts(self):
        index = index_of("""
            public class Base {
                public void put(String s) { int x = 0; }
            }
            class Sub extends Base {
                public void put(String s, int n) { int x = 1; }
                public void put(char c) { int x = 2; }
            }
        """)
        with pytest.raises(AmbiguousCallSite):
            plan_transform(index)

    def test_three_way_overload_end_to_end(self, tmp_path):
        repo = write_repo(tmp_path, {
            "Tri.java": """
                public class Tri {
                    public int go(String s) { return 1; }
                    public int go(char c) { return 2; }
                    public int go(int n) { return 3; }
                    public int all() { return go("a") + go('b') + go(7); }
                }
            """,
        }, {
            "TriTest.java": """
                import org.junit.Test;
                import static org.junit.Assert.*;
                public class TriTest {
                    @Test
                    public void dispatches() {
                        Tri tri = new Tri();
                        assertEquals(6, tri.all());
                        assertEquals(1, tri.go0("x"));
                    }
                }
            """,
        })
        # the test calls the post-transform name; baseline uses the original
        original_test = (tmp_path / "src/test/TriTest.java").read_text()
        (tmp_path / "src/test/TriTest.java").write_text(
            original_test.replace('tri.go0("x")', 'tri.go("x")'))
        out = tmp_path / "out"
        run_transform(repo, out)
        schema = parse_repository(SourceRepo.at(out))
        names = sorted(f.signature for f in schema.fragments
                       if f.class_qname == "Tri" and f.kind != "field")
        assert names == ["all()", "go0(String)", "go1(char)", "go2(int)"]
        result = run_source_suite(SourceRepo.at(out))
        assert result.all_green(), [c.message for c in result.cases]


class TestConstructorRewrites:
    def test_merged_ids_are_dense_and_bodies_reachable(self, prepared_work):
        schema = parse_repository(SourceRepo.at(prepared_work.transformed))
        flag_ctors = [f for f in schema.fragments
                      if f.class_qname == "minilib.core.Flag" and f.is_constructor]
        assert len(flag_ctors) == 1
        assert flag_ctors[0].param_types[0] == "int"
        rename = (prepared_work.transformed / "rename_map.json").read_text()
        assert '"minilib.core.Flag#Flag(String)": 0' in rename
        assert '"minilib.core.Flag#Flag(String,char)": 1' in rename

    def test_factory_call_form_at_call_sites(self, prepared_work):
        text = (prepared_work.transformed /
                "src/test/minilib/core/OptionTest.java").read_text()
        assert "Option.Option1(" in text
        range_test = (prepared_work.transformed /
                      "src/test/minilib/core/RangeTest.java").read_text()
        assert "Range.Range1(9)" in range_test

    def test_delegation_chain_rejected(self):
        index = index_of("""
            public class A {
                public A(int x, int y, int z) { int w = x; }
                public A(int x, int y) { this(x, y, 0); }
                public A(int x) { this(x, 0); }
            }
        """)
        with pytest.raises(UnsupportedChain):
            plan_transform(index)


class TestVerification:
    def test_untouched_repo_baseline_equality(self):
        repo = SourceRepo.at(MINIREPO)
        report = verify_transformation(repo, repo)
        assert report.ok and not report.regressions

    def test_fixture_transformation_preserves_pass_set(self, prepared_work):
        report = verify_transformation(SourceRepo.at(MINIREPO),
                                       SourceRepo.at(prepared_work.transformed))
        assert report.ok, report.log

    def test_no_residual_overloads_after_transform(self, prepared_work):
        schema = parse_repository(SourceRepo.at(prepared_work.transformed))
        for record in schema.classes:
            seen = set()
            for frag in schema.fragments:
                if frag.class_qname != record.qualified_name or frag.kind == "field":
                    continue
                key = (frag.name, frag.is_constructor)
                assert key not in seen, f"{record.qualified_name} kept overload {frag.name}"
                seen.add(key)

    def test_corrupted_plan_names_failing_test(self, prepared_work, tmp_path):
        import shutil

        broken = tmp_path / "broken"
        shutil.copytree(prepared_work.transformed, broken)
        target = broken / "src/test/minilib/core/FlagTest.java"
        # wrong constructor id at one call site
        target.write_text(target.read_text().replace(
            'new Flag(0, "verbose",', 'new Flag(1, "verbose",'))
        report = verify_transformation(SourceRepo.at(MINIREPO), SourceRepo.at(broken))
        assert not report.ok
        assert "minilib.core.FlagTest#buildsWithDefaultLetter" in report.log
