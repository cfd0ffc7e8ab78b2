"""Compositional translation-and-validation loop and its supporting parts."""

from fragport.orchestrator.budget import (
    DEFAULT_MAX_BUDGET, DEFAULT_MIN_BUDGET, FEEDBACK_BUDGET, BudgetPolicy, adaptive_budget,
)
from fragport.orchestrator.eligibility import EligibleChain, eligible_tests
from fragport.orchestrator.isolation import (
    AbsentIsolation, IsolationClient, ProcessIsolation,
)
from fragport.orchestrator.journal import Journal
from fragport.orchestrator.loop import Orchestrator, SliceView
from fragport.orchestrator.suspicious import SuspiciousnessRanking, rank_suspicious
from fragport.orchestrator.tvo import TVO, Attempt

__all__ = [
    "AbsentIsolation", "Attempt", "BudgetPolicy", "DEFAULT_MAX_BUDGET",
    "DEFAULT_MIN_BUDGET", "EligibleChain", "FEEDBACK_BUDGET", "IsolationClient",
    "Journal", "Orchestrator", "ProcessIsolation", "SliceView",
    "SuspiciousnessRanking", "TVO", "adaptive_budget", "eligible_tests",
    "rank_suspicious",
]
