"""Metric partition identities (exact rational arithmetic) and formatting."""

from __future__ import annotations

import random
from decimal import Decimal
from fractions import Fraction

from fragport.metrics import FragmentOutcome, bucket_of, compute_metrics, percent


def random_outcomes(rng: random.Random, n: int) -> list[FragmentOutcome]:
    outcomes = []
    for i in range(n):
        covered = rng.random() < 0.7
        graal = rng.choice(["graal-success", "graal-fail", "graal-error", "not-run"]) \
            if covered else "not-run"
        applicable = []
        if covered and rng.random() < 0.8:
            for _ in range(rng.randint(0, 5)):
                status = rng.choice(["pass", "fail", "error", "skipped"])
                kind = None
                if status in ("fail", "error"):
                    kind = rng.choice(["assertion_failure", "runtime_error"])
                applicable.append((status, kind))
        outcomes.append(FragmentOutcome(
            fragment_id=f"f{i}", covered=covered,
            syntax=rng.choice(["parseable", "non-parseable"]),
            graal=graal, applicable=applicable))
    return outcomes


class TestPartitionIdentities:
    def test_identities_hold_over_1000_random_tvo_sets(self):
        rng = random.Random(20240601)
        for trial in range(1000):
            outcomes = random_outcomes(rng, rng.randint(1, 40))
            table = compute_metrics(outcomes)
            # graal partition over covered + uncovered, exact
            assert table.snef + table.gs + table.gf + table.ge == Fraction(1)
            covered_share = Fraction(sum(1 for o in outcomes if o.covered), len(outcomes))
            assert table.tnef + table.atp + table.otf + table.mtf + table.atf \
                == covered_share
            for value in (table.syntax_check, table.snef, table.gs, table.gf,
                          table.ge, table.tnef, table.atp, table.otf, table.mtf,
                          table.atf, table.tpr):
                assert Fraction(0) <= value <= Fraction(1)
            for re_share, af_share in ((table.otf_re, table.otf_af),
                                       (table.mtf_re, table.mtf_af),
                                       (table.atf_re, table.atf_af)):
                assert re_share + af_share in (Fraction(0), Fraction(1))

    def test_buckets_are_disjoint_and_exhaustive(self):
        cases = {
            "tnef": FragmentOutcome("a", True, "parseable", "not-run", []),
            "atp": FragmentOutcome("b", True, "parseable", "not-run",
                                   [("pass", None), ("pass", None)]),
            "otf": FragmentOutcome("c", True, "parseable", "not-run",
                                   [("pass", None), ("fail", "assertion_failure")]),
            "mtf": FragmentOutcome("d", True, "parseable", "not-run",
                                   [("fail", "runtime_error"), ("error", "runtime_error"),
                                    ("pass", None)]),
            "atf": FragmentOutcome("e", True, "parseable", "not-run",
                                   [("fail", "runtime_error"), ("error", "runtime_error")]),
        }
        for expected, outcome in cases.items():
            assert bucket_of(outcome) == expected

    def test_single_applicable_all_failing_is_atf(self):
        outcome = FragmentOutcome("a", True, "parseable", "not-run",
                                  [("fail", "assertion_failure")])
        assert bucket_of(outcome) == "atf"

    def test_degenerate_all_not_exercised(self):
        outcomes = [FragmentOutcome(f"f{i}", covered=i < 6, syntax="parseable",
                                    graal="graal-error" if i < 6 else "not-run",
                                    applicable=[])
                    for i in range(10)]
        table = compute_metrics(outcomes)
        assert table.tnef == Fraction(6, 10)
        assert table.atp == table.otf == table.mtf == table.atf == Fraction(0)
        assert table.tpr == Fraction(0)


class TestFormatting:
    def test_two_decimal_half_up(self):
        assert percent(Fraction(1, 3)) == Decimal("33.33")
        assert percent(Fraction(1, 800)) == Decimal("0.13")     # 0.125 rounds up
        assert percent(Fraction(1)) == Decimal("100.00")

    def test_golden_format_sample_from_reported_totals(self):
        # shape check against published whole-project totals: 4654 AMFs,
        # 98.80% syntax, 24.50% GS, 9.76% TPR
        assert percent(Fraction(4598, 4654)) == Decimal("98.80")
        assert percent(Fraction(1140, 4654)) == Decimal("24.50")
        assert percent(Fraction(1104, 11316)) == Decimal("9.76")

    def test_table_serializes_to_percent_dict(self):
        outcomes = [FragmentOutcome("a", True, "parseable", "graal-success",
                                    [("pass", None)])]
        doc = compute_metrics(outcomes).as_percent_dict()
        assert doc["AMF"] == 1
        assert doc["GS%"] == 100.0
        assert doc["TPR%"] == 100.0


class TestM1:
    def test_m1_counts_ge_fragments_exercised_by_translated_tests(self):
        outcomes = [
            FragmentOutcome("all_pass", True, "parseable", "graal-error",
                            [("pass", None), ("pass", None)]),
            FragmentOutcome("some_pass", True, "parseable", "graal-error",
                            [("pass", None), ("fail", "runtime_error")]),
            FragmentOutcome("none_ran", True, "parseable", "graal-error", []),
            FragmentOutcome("succeeded", True, "parseable", "graal-success",
                            [("pass", None)]),
        ]
        table = compute_metrics(outcomes)
        assert table.m1_all == 1
        assert table.m1_some == 1
