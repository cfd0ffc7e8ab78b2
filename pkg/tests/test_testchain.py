"""Test slicing invariants: prefix-subset, one-new-call, short-circuit."""

from __future__ import annotations

import random
import textwrap

from fragport.decompose import decompose_all, decompose_test, execute_chain
from fragport.decompose.testchain import TestFragmentChain as FragmentChain
from fragport.execharness.results import TestCaseResult as CaseResult
from fragport.sourcemodel.extract import build_index, parse_repository
from fragport.sourcemodel.model import SourceRepo


def chains_of(work) -> list[FragmentChain]:
    repo = SourceRepo.at(work.transformed)
    schema = parse_repository(repo)
    return decompose_all(repo, schema)


def assert_chain_invariants(chain: FragmentChain):
    prev_stmts = 0
    prev_direct: set[str] = set()
    prev_code = None
    for frag in chain.fragments:
        assert frag.statement_count > prev_stmts, "statement prefix must grow"
        if prev_code is not None:
            assert frag.code.startswith(prev_code), "cumulative code keeps its prefix"
        new_calls = set(frag.exercised_direct) - prev_direct
        if frag.newly_exercised is not None:
            assert len(new_calls) == 1, f"{chain.method_name}[{frag.index}]: {new_calls}"
            assert frag.newly_exercised in new_calls
        prev_stmts = frag.statement_count
        prev_direct = set(frag.exercised_direct)
        prev_code = frag.code


class TestFixtureChains:
    def test_every_fixture_chain_keeps_invariants(self, prepared_work):
        chains = chains_of(prepared_work)
        assert len(chains) == 19
        for chain in chains:
            assert_chain_invariants(chain)

    def test_loop_statement_pulls_whole_block(self, prepared_work):
        chains = chains_of(prepared_work)
        loop_chain = next(c for c in chains if c.method_name == "countsSeparatorsInsideLoop")
        assert len(loop_chain.fragments) == 1
        frag = loop_chain.fragments[0]
        assert frag.enclosing_blocks_included
        assert "for (" in frag.code and frag.code.count("\n") >= 3

    def test_no_cut_points_yields_single_verbatim_fragment(self, tmp_path):
        root = tmp_path / "repo"
        (root / "src/main").mkdir(parents=True)
        (root / "src/test").mkdir(parents=True)
        (root / "build.json").write_text(
            '{"source_dirs": ["src/main"], "test_dirs": ["src/test"]}')
        (root / "src/main/Dummy.java").write_text(
            "public class Dummy {\n    public int id() { return 1; }\n}\n")
        (root / "src/test/PureTest.java").write_text(textwrap.dedent("""
            import org.junit.Test;
            import static org.junit.Assert.*;
            public class PureTest {
                @Test
                public void arithmeticOnly() {
                    int a = 2 + 2;
                    assertEquals(4, a);
                }
            }
        """).strip() + "\n")
        repo = SourceRepo.at(root)
        schema = parse_repository(repo)
        index = build_index(repo)
        test = next(f for f in schema.fragments_of_kind("test_method")
                    if "Test" in f.annotations)
        chain = decompose_test(test, schema, index)
        assert len(chain.fragments) == 1
        assert chain.fragments[0].newly_exercised is None
        assert "int a = 2 + 2;" in chain.fragments[0].code


class TestRandomizedChains:
    def test_invariants_over_randomized_synthetic_tests(self, tmp_path):
        rng = random.Random(987)
        root = tmp_path / "synth"
        (root / "src/main").mkdir(parents=True)
        (root / "src/test").mkdir(parents=True)
        (root / "build.json").write_text(
            '{"source_dirs": ["src/main"], "test_dirs": ["src/test"]}')
        ops = [f"op{i}" for i in range(8)]
        (root / "src/main/Machine.java").write_text(
            "public class Machine {\n"
            + "\n".join(f"    public int {op}(int v) {{ return v + {i}; }}"
                        for i, op in enumerate(ops))
            + "\n}\n")

        methods = []
        for t in range(100):
            body = ["        Machine m = new Machine();", "        int acc = 0;"]
            for _ in range(rng.randint(1, 6)):
                kind = rng.random()
                if kind < 0.5:
                    body.append(f"        acc = acc + m.{rng.choice(ops)}(1);")
                elif kind < 0.7:
                    body.append("        acc = acc + 1;")
                elif kind < 0.85:
                    op = rng.choice(ops)
                    body.append("        if (acc > 1) {\n"
                                f"            acc = m.{op}(acc);\n"
                                "        }")
                else:
                    op = rng.choice(ops)
                    body.append("        for (int i = 0; i < 2; i++) {\n"
                                f"            acc = acc + m.{op}(i);\n"
                                "        }")
            body.append("        assertTrue(acc >= 0);")
            methods.append(
                f"    @Test\n    public void t{t:03d}() {{\n" + "\n".join(body) + "\n    }")
        (root / "src/test/SynthTest.java").write_text(
            "import org.junit.Test;\nimport static org.junit.Assert.*;\n"
            "public class SynthTest {\n" + "\n\n".join(methods) + "\n}\n")

        repo = SourceRepo.at(root)
        schema = parse_repository(repo)
        chains = decompose_all(repo, schema)
        assert len(chains) == 100
        for chain in chains:
            assert_chain_invariants(chain)


class TestShortCircuit:
    def test_execute_chain_skips_after_first_failure(self, prepared_work):
        chain = next(c for c in chains_of(prepared_work)
                     if c.method_name == "rejectsCountsApplications")
        fail_at = 1

        def runner(ch, frag):
            status = "pass" if frag.index < fail_at else "fail"
            return CaseResult(ch.fragment_id(frag.index), status,
                                  "assertion_failure" if status == "fail" else None)

        results = execute_chain(chain, runner)
        statuses = [r.status for r in results]
        assert statuses[:fail_at] == ["pass"] * fail_at
        assert statuses[fail_at] == "fail"
        assert all(s == "skipped" for s in statuses[fail_at + 1:])
        executed = sum(1 for s in statuses if s != "skipped")
        skipped = sum(1 for s in statuses if s == "skipped")
        assert executed + skipped == len(chain.fragments)

    def test_all_green_chain_never_skips(self, prepared_work):
        chain = chains_of(prepared_work)[0]

        def runner(ch, frag):
            return CaseResult(ch.fragment_id(frag.index), "pass")

        results = execute_chain(chain, runner)
        assert all(r.status == "pass" for r in results)
