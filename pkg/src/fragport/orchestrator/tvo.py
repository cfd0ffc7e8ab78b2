"""Translation-validation outcome labels and per-fragment attempt history."""

from __future__ import annotations

from dataclasses import dataclass, field

SYNTAX_LABELS = ("non-parseable", "parseable")
GRAAL_LABELS = ("graal-fail", "graal-success", "graal-error", "not-run")
TEST_LABELS = ("not-exercised", "test-fail", "test-success", "not-run")


@dataclass
class Attempt:
    prompt_hash: str
    outcome: str                  # no-code | non-parseable | insert-failed | inserted | backend-error
    feedback: str | None = None

    def to_dict(self) -> dict:
        return {"prompt_hash": self.prompt_hash, "outcome": self.outcome,
                "feedback": self.feedback}


@dataclass
class TVO:
    fragment_id: str
    syntax_outcome: str | None = None
    graal_outcome: str = "not-run"
    test_outcome: str = "not-run"
    attempts: list[Attempt] = field(default_factory=list)

    def check(self) -> None:
        assert self.syntax_outcome in SYNTAX_LABELS + (None,)
        assert self.graal_outcome in GRAAL_LABELS
        assert self.test_outcome in TEST_LABELS
        if self.test_outcome != "not-run":
            assert self.syntax_outcome == "parseable"

    def to_dict(self) -> dict:
        return {
            "fragment_id": self.fragment_id,
            "syntax_outcome": self.syntax_outcome,
            "graal_outcome": self.graal_outcome,
            "test_outcome": self.test_outcome,
            "attempts": [a.to_dict() for a in self.attempts],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TVO":
        return cls(
            fragment_id=data["fragment_id"],
            syntax_outcome=data["syntax_outcome"],
            graal_outcome=data["graal_outcome"],
            test_outcome=data["test_outcome"],
            attempts=[Attempt(**a) for a in data["attempts"]],
        )
