"""Source/target suite execution, result parsing, failure classification."""

from __future__ import annotations

import textwrap

import pytest

from conftest import MINIREPO

from fragport.decompose.testchain import TestFragmentChain as FragmentChain
from fragport.execharness.results import TestCaseResult as CaseResult
from fragport.execharness.source import parse_junit_xml, run_source_suite
from fragport.execharness.target import (
    classify_failure, run_chain_subprocess, run_target_suite,
)
from fragport.sourcemodel.model import SourceRepo


class TestSourceSuite:
    def test_fixture_baseline_all_green(self, minirepo):
        result = run_source_suite(minirepo)
        assert len(result.cases) == 19
        assert result.all_green()

    def test_empty_selection_is_vacuous_pass(self, minirepo):
        result = run_source_suite(minirepo, selection=[])
        assert result.cases == [] and result.all_green()

    def test_selection_filters_by_test_id(self, minirepo):
        wanted = "minilib.core.FlagTest#enableTogglesState"
        result = run_source_suite(minirepo, selection=[wanted])
        assert [c.test_id for c in result.cases] == [wanted]

    def test_post_transform_pass_set_identical(self, prepared_work, minirepo):
        before = run_source_suite(minirepo)
        after = run_source_suite(SourceRepo.at(prepared_work.transformed))
        assert before.passed == after.passed

    def test_xml_failure_kinds_parse(self, tmp_path):
        xml = tmp_path / "r.xml"
        xml.write_text(textwrap.dedent("""\
            <?xml version='1.0' encoding='utf-8'?>
            <testsuite name="s" tests="3" failures="1" errors="1" time="0.1">
              <testcase classname="p.C" name="ok" time="0.01"/>
              <testcase classname="p.C" name="broken" time="0.01">
                <failure type="AssertionError" message="expected 1">trace</failure>
              </testcase>
              <testcase classname="p.C" name="crashed" time="0.01">
                <error type="RuntimeError" message="NPE">trace</error>
              </testcase>
            </testsuite>
        """))
        result = parse_junit_xml(xml)
        assert result.case("p.C#ok").status == "pass"
        assert result.case("p.C#broken").failure_kind == "assertion_failure"
        assert result.case("p.C#crashed").failure_kind == "runtime_error"


class TestClassification:
    def test_assertion_signal(self):
        case = CaseResult("t", "fail", "assertion_failure", "boom", "AssertionError: boom")
        assert classify_failure(case) == "assertion_failure"

    def test_runtime_error(self):
        case = CaseResult("t", "error", "runtime_error", "NameError", "NameError: x")
        assert classify_failure(case) == "runtime_error"

    def test_kind_inferred_from_trace_when_missing(self):
        case = CaseResult("t", "fail", None, "", "AssertionError: 1 != 2")
        assert classify_failure(case) == "assertion_failure"
        case2 = CaseResult("t", "error", None, "", "TypeError: bad")
        assert classify_failure(case2) == "runtime_error"

    def test_pass_is_not_classifiable(self):
        with pytest.raises(ValueError):
            classify_failure(CaseResult("t", "pass"))

    def test_seeded_corpus_matches_hand_labels(self, replay_run, prepared_schema):
        """Ten seeded failures over the translated fixture classify as labeled."""
        work, _ = replay_run
        chains = [FragmentChain.from_dict(d) for d in prepared_schema.test_chains]
        chain = next(c for c in chains if c.method_name == "registerLinksEntries")
        hand_labeled = [
            ("self.assertEqual(2, 1)", "assertion_failure"),
            ("self.assertTrue(False)", "assertion_failure"),
            ("self.assertEqual('a', 'b')", "assertion_failure"),
            ("self.fail('seeded')", "assertion_failure"),
            ("self.assertIsNone('x')", "assertion_failure"),
            ("raise ValueError('seeded')", "runtime_error"),
            ("undefined_name", "runtime_error"),
            ("1 // 0", "runtime_error"),
            ("[].pop()", "runtime_error"),
            ("None.attr", "runtime_error"),
        ]
        import shutil

        for i, (stmt, expected) in enumerate(hand_labeled):
            root = work.root.parent / f"cls_{i}"
            shutil.rmtree(root, ignore_errors=True)
            shutil.copytree(work.skeleton_root, root)
            test_file = root / "tests/minilib/core/test_registry_test.py"
            text = test_file.read_text()
            marker = "def test_registerLinksEntries_0(self) -> None:"
            body_line = text.index(marker)
            insert_at = text.index("\n", body_line) + 1
            text = text[:insert_at] + f"        {stmt}\n" + text[insert_at:]
            test_file.write_text(text)
            cases = run_chain_subprocess(root, chain, prefix_end=0)
            assert cases[0].status in ("fail", "error"), (stmt, cases[0].message)
            assert classify_failure(cases[0]) == expected, stmt


class TestTargetSuite:
    def test_replay_fixture_runs_all_green(self, replay_run, prepared_schema):
        work, _ = replay_run
        chains = [FragmentChain.from_dict(d) for d in prepared_schema.test_chains]
        result, skip_map = run_target_suite(work.skeleton_root, chains)
        assert result.all_green()
        assert sum(skip_map.values()) == 0
        total = sum(len(c.fragments) for c in chains)
        assert len(result.cases) == total

    def test_executed_plus_skipped_equals_chain_length(self, replay_run, prepared_schema):
        work, _ = replay_run
        chains = [FragmentChain.from_dict(d) for d in prepared_schema.test_chains]
        chain = next(c for c in chains if len(c.fragments) >= 3)
        import shutil

        root = work.root.parent / "skipcase"
        shutil.rmtree(root, ignore_errors=True)
        shutil.copytree(work.skeleton_root, root)
        # seed a failure into slice 1 of this chain's module
        from fragport.execharness.target import chain_module_and_class

        module, _cls = chain_module_and_class(chain)
        path = root / (module.replace(".", "/") + ".py")
        text = path.read_text()
        marker = f"def test_{chain.method_name}_1(self) -> None:"
        at = text.index(marker)
        insert_at = text.index("\n", at) + 1
        path.write_text(text[:insert_at] + "        raise RuntimeError('seeded')\n"
                        + text[insert_at:])
        cases = run_chain_subprocess(root, chain)
        executed = [c for c in cases if c.status != "skipped"]
        skipped = [c for c in cases if c.status == "skipped"]
        assert len(executed) + len(skipped) == len(chain.fragments)
        assert executed[-1].status in ("fail", "error")
        assert len(skipped) == len(chain.fragments) - 2
