"""Budget law, eligibility, suspiciousness ranking, TVO invariants."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from fragport.decompose.testchain import TestFragmentChain as FragmentChain
from fragport.execharness.results import TestCaseResult as CaseResult
from fragport.orchestrator import (
    BudgetPolicy, TVO, adaptive_budget, eligible_tests, rank_suspicious,
)


class TestAdaptiveBudget:
    def test_defaults_are_three_to_five(self):
        policy = BudgetPolicy()
        assert (policy.min_budget, policy.max_budget) == (3, 5)

    def test_zero_hits_clamps_to_min(self):
        policy = BudgetPolicy(coverage_hits={"a": 0, "b": 10})
        assert adaptive_budget("a", policy) == 3

    def test_max_hits_reaches_max_and_mid_hits_interpolate(self):
        policy = BudgetPolicy(coverage_hits={"lo": 0, "mid": 5, "hi": 10})
        assert adaptive_budget("hi", policy) == 5
        assert adaptive_budget("mid", policy) == 4

    def test_unknown_fragment_gets_min(self):
        policy = BudgetPolicy(coverage_hits={"a": 3})
        assert adaptive_budget("zzz", policy) == 3

    def test_all_zero_coverage_is_min(self):
        policy = BudgetPolicy(coverage_hits={"a": 0})
        assert adaptive_budget("a", policy) == 3

    def test_invalid_bounds_rejected(self):
        with pytest.raises(ValueError):
            BudgetPolicy(min_budget=5, max_budget=3)

    @given(st.dictionaries(st.text(min_size=1, max_size=4),
                           st.integers(min_value=0, max_value=1000),
                           min_size=1, max_size=40))
    @settings(max_examples=200, deadline=None)
    def test_clamped_and_monotone_over_random_hit_tables(self, hits):
        policy = BudgetPolicy(coverage_hits=hits)
        budgets = {fid: adaptive_budget(fid, policy) for fid in hits}
        assert all(3 <= b <= 5 for b in budgets.values())
        ranked = sorted(hits.items(), key=lambda kv: kv[1])
        for (fa, ha), (fb, hb) in zip(ranked, ranked[1:]):
            assert budgets[fa] <= budgets[fb], (ha, hb)


def make_chain(origin: str, closures: list[list[str]]) -> FragmentChain:
    from fragport.decompose.testchain import TestFragment

    fragments = [TestFragment(index=i, code=f"s{i}", newly_exercised=c[-1] if c else None,
                              enclosing_blocks_included=False, statement_count=i + 1,
                              exercised_direct=list(c), exercised_closure=list(c))
                 for i, c in enumerate(closures)]
    return FragmentChain(origin_test=origin, class_qname="T", method_name=origin,
                         setup_methods=[], fragments=fragments)


class TestEligibility:
    def test_first_fragment_of_deep_chain_not_eligible(self):
        chain = make_chain("t1", [["a"], ["a", "b"], ["a", "b", "c"]])
        assert eligible_tests("c", [chain], inserted={"c"}) == []

    def test_full_chain_eligible_once_all_translated(self):
        chain = make_chain("t1", [["a"], ["a", "b"], ["a", "b", "c"]])
        out = eligible_tests("a", [chain], inserted={"a", "b", "c"})
        assert len(out) == 1 and out[0].prefix_end == 2

    def test_prefix_limited_by_untranslated_tail(self):
        chain = make_chain("t1", [["a"], ["a", "b"], ["a", "b", "c"]])
        out = eligible_tests("a", [chain], inserted={"a", "b"})
        assert len(out) == 1 and out[0].prefix_end == 1

    def test_slice_cap_restricts_prefix(self):
        chain = make_chain("t1", [["a"], ["a", "b"]])
        out = eligible_tests("a", [chain], inserted={"a", "b"},
                             slice_cap={"t1": 0})
        assert out and out[0].prefix_end == 0

    def test_matches_brute_force_on_fixture_snapshot(self, prepared_schema):
        chains = [FragmentChain.from_dict(d) for d in prepared_schema.test_chains]
        app_ids = [f.id for f in prepared_schema.fragments_of_kind("application_method")]
        rng = random.Random(7)
        for _ in range(25):
            inserted = set(rng.sample(app_ids, k=rng.randint(0, len(app_ids))))
            probe = rng.choice(app_ids)
            got = {(e.chain.chain_id, e.prefix_end)
                   for e in eligible_tests(probe, chains, inserted)}
            expected = set()
            for chain in chains:
                best = -1
                for frag in chain.fragments:
                    closure = set(frag.exercised_closure)
                    if not closure <= inserted:
                        break
                    if probe in closure:
                        best = frag.index
                if best >= 0:
                    expected.add((chain.chain_id, best))
            assert got == expected


class TestSuspiciousRanking:
    def _runs(self, spec):
        """spec: list of (chain_id, [(closure, status)])"""
        runs = []
        for chain_id, slices in spec:
            chain = make_chain(chain_id, [c for c, _ in slices])
            results = [CaseResult(chain.fragment_id(i), status,
                                  "runtime_error" if status == "error" else
                                  ("assertion_failure" if status == "fail" else None))
                       for i, (_, status) in enumerate(slices)]
            runs.append((chain, results))
        return runs

    def test_more_failing_tests_rank_higher(self):
        runs = self._runs([
            ("t1", [(["x"], "fail")]),
            ("t2", [(["x"], "fail")]),
            ("t3", [(["x", "y"], "fail")]),
        ])
        ranking = rank_suspicious(runs, tvos={}, positions={}, topk=3)
        assert ranking.ranked[0] == "x"
        assert ranking.scores["x"] == 3 and ranking.scores["y"] == 1

    def test_graal_success_fragments_excluded(self):
        runs = self._runs([("t1", [(["x", "y"], "fail")])])
        tvos = {"x": TVO("x", graal_outcome="graal-success")}
        ranking = rank_suspicious(runs, tvos=tvos, positions={}, topk=3)
        assert "x" not in ranking.scores and "y" in ranking.scores

    def test_all_involved_graal_success_means_empty_set(self):
        runs = self._runs([("t1", [(["x"], "fail")])])
        tvos = {"x": TVO("x", graal_outcome="graal-success")}
        ranking = rank_suspicious(runs, tvos=tvos, positions={}, topk=3)
        assert ranking.top() == []

    def test_tie_breaks_fewer_passing_then_later_order(self):
        runs = self._runs([
            ("t1", [(["a", "b"], "fail")]),
            ("t2", [(["b"], "pass")]),
        ])
        ranking = rank_suspicious(runs, tvos={}, positions={"a": 1, "b": 2}, topk=2)
        # both have one failing test; b has one passing test, so a ranks first
        assert ranking.ranked == ["a", "b"]
        runs2 = self._runs([("t1", [(["a", "b"], "fail")])])
        ranking2 = rank_suspicious(runs2, tvos={}, positions={"a": 1, "b": 2}, topk=2)
        # full tie: later translation order (larger position) ranks first
        assert ranking2.ranked == ["b", "a"]

    def test_skipped_slices_do_not_count(self):
        chain = make_chain("t1", [(["a"]), (["a", "b"])])
        results = [CaseResult(chain.fragment_id(0), "fail", "runtime_error"),
                   CaseResult(chain.fragment_id(1), "skipped")]
        ranking = rank_suspicious([(chain, results)], tvos={}, positions={}, topk=3)
        assert "b" not in ranking.scores


class TestTVOInvariants:
    def test_label_vocabulary_and_implication_on_replay(self, replay_run):
        _, tvos = replay_run
        for tvo in tvos.values():
            tvo.check()

    def test_attempts_bounded_by_budget_plus_feedback(self, replay_run, prepared_schema):
        _, tvos = replay_run
        policy = BudgetPolicy(coverage_hits=dict(prepared_schema.coverage))
        for fid, tvo in tvos.items():
            if "#" in fid.split("@")[-1]:
                continue  # chain slices use the min budget
            try:
                prepared_schema.fragment_by_id(fid)
            except KeyError:
                continue
            limit = adaptive_budget(fid, policy) + 1
            assert len(tvo.attempts) <= limit, fid


class TestReplayReproducibility:
    def test_two_replay_runs_are_bit_identical(self, prepared_work, prepared_schema,
                                               replay_run, tmp_path):
        """Same cache, same inputs: identical labels and identical recomposed
        project bytes."""
        import sys
        from pathlib import Path

        sys.path.insert(0, str(Path(__file__).parent))
        from conftest import clone_work
        from oracle_utils import write_replay_cache

        from fragport.backend.backends import ReplayCacheBackend
        from fragport.pipeline import stage_translate

        first_work, first_tvos = replay_run
        work = clone_work(prepared_work, tmp_path / "again")
        cache = write_replay_cache(prepared_schema, tmp_path / "cache")
        second_tvos = stage_translate(work, ReplayCacheBackend(cache))

        assert {fid: t.to_dict() for fid, t in first_tvos.items()} == \
            {fid: t.to_dict() for fid, t in second_tvos.items()}

        def tree_bytes(root: Path) -> dict[str, bytes]:
            return {str(p.relative_to(root)): p.read_bytes()
                    for p in sorted(root.rglob("*.py"))}

        assert tree_bytes(first_work.skeleton_root) == tree_bytes(work.skeleton_root)
