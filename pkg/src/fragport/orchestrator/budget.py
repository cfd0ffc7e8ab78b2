"""Adaptive reprompting budget driven by source-coverage hit counts.

budget = min + round_half_up((max - min) * hits / max_hits), clamped to
[min, max]; fragments the source tests hit more often get more attempts.
Half-up rounding keeps the function monotone in hits (bankers' rounding
would not).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

DEFAULT_MIN_BUDGET = 3
DEFAULT_MAX_BUDGET = 5
FEEDBACK_BUDGET = 1


@dataclass
class BudgetPolicy:
    min_budget: int = DEFAULT_MIN_BUDGET
    max_budget: int = DEFAULT_MAX_BUDGET
    coverage_hits: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not (0 < self.min_budget <= self.max_budget):
            raise ValueError(f"budgets must satisfy 0 < min <= max, "
                             f"got {self.min_budget}..{self.max_budget}")

    @property
    def max_hits(self) -> int:
        return max(self.coverage_hits.values(), default=0)


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def adaptive_budget(fragment_id: str, policy: BudgetPolicy) -> int:
    hits = policy.coverage_hits.get(fragment_id, 0)
    max_hits = policy.max_hits
    if max_hits <= 0:
        return policy.min_budget
    span = policy.max_budget - policy.min_budget
    budget = policy.min_budget + _round_half_up(span * min(hits, max_hits) / max_hits)
    return max(policy.min_budget, min(policy.max_budget, budget))
