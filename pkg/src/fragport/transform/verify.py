"""Behavior-preservation check: same source-test pass set before and after."""

from __future__ import annotations

from dataclasses import dataclass

from fragport.execharness.source import run_source_suite
from fragport.sourcemodel.model import SourceRepo


@dataclass
class VerificationReport:
    ok: bool
    baseline_passed: set[str]
    transformed_passed: set[str]
    log: str

    @property
    def regressions(self) -> set[str]:
        return self.baseline_passed - self.transformed_passed

    @property
    def new_passes(self) -> set[str]:
        return self.transformed_passed - self.baseline_passed


def verify_transformation(baseline: SourceRepo, transformed: SourceRepo) -> VerificationReport:
    before = run_source_suite(baseline)
    after = run_source_suite(transformed)
    ok = before.passed == after.passed and {c.test_id for c in before.cases} == \
        {c.test_id for c in after.cases}
    lines = []
    if not ok:
        for test_id in sorted(before.passed - after.passed):
            case = after.case(test_id) if any(c.test_id == test_id for c in after.cases) else None
            detail = f"{case.status}: {case.message}" if case else "missing from transformed run"
            lines.append(f"regressed {test_id} -> {detail}")
        for test_id in sorted(after.passed - before.passed):
            lines.append(f"unexpectedly passing {test_id}")
    return VerificationReport(ok, before.passed, after.passed, "\n".join(lines))
