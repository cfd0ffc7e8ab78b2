"""Normalized test-run results shared by the source and target harnesses."""

from __future__ import annotations

from dataclasses import dataclass, field

STATUSES = ("pass", "fail", "error", "skipped")
FAILURE_KINDS = ("assertion_failure", "runtime_error")


@dataclass
class TestCaseResult:
    test_id: str
    status: str                         # pass | fail | error | skipped
    failure_kind: str | None = None     # assertion_failure | runtime_error (non-pass only)
    message: str = ""
    trace: str = ""
    duration: float = 0.0

    def to_dict(self) -> dict:
        return {
            "test_id": self.test_id, "status": self.status,
            "failure_kind": self.failure_kind, "message": self.message,
            "trace": self.trace, "duration": self.duration,
        }


@dataclass
class TestRunResult:
    suite_id: str
    cases: list[TestCaseResult] = field(default_factory=list)
    duration: float = 0.0
    log: str = ""

    @property
    def passed(self) -> set[str]:
        return {c.test_id for c in self.cases if c.status == "pass"}

    @property
    def not_passed(self) -> set[str]:
        return {c.test_id for c in self.cases if c.status in ("fail", "error")}

    def all_green(self) -> bool:
        return not self.not_passed

    def case(self, test_id: str) -> TestCaseResult:
        for c in self.cases:
            if c.test_id == test_id:
                return c
        raise KeyError(test_id)

    def to_dict(self) -> dict:
        return {
            "suite_id": self.suite_id,
            "cases": [c.to_dict() for c in self.cases],
            "duration": self.duration,
        }
