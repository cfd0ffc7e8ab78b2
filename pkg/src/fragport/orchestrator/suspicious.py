"""Suspiciousness ranking of fragments involved in failing chain runs.

Fragments already validated in isolation (graal-success) are filtered out.
More failing tests covering a fragment means a strictly higher score; ties
break toward fewer passing tests, then the later translation-order position.
"""

from __future__ import annotations

from dataclasses import dataclass, field

DEFAULT_TOPK = 3


@dataclass
class SuspiciousnessRanking:
    scores: dict[str, int] = field(default_factory=dict)
    passing: dict[str, int] = field(default_factory=dict)
    topk: int = DEFAULT_TOPK
    ranked: list[str] = field(default_factory=list)

    def top(self) -> list[str]:
        return self.ranked[:self.topk]


def rank_suspicious(chain_results: list[tuple[object, list]], tvos: dict,
                    positions: dict[str, int], topk: int = DEFAULT_TOPK,
                    exclude: set[str] | None = None) -> SuspiciousnessRanking:
    """chain_results: (chain, per-slice TestCaseResult list) for the runs that
    just happened; involvement comes from the exercised closures of executed
    slices."""
    failing: dict[str, int] = {}
    passing: dict[str, int] = {}
    for chain, results in chain_results:
        for frag, case in zip(chain.fragments, results):
            if case.status == "skipped":
                continue
            bucket = failing if case.status in ("fail", "error") else passing
            for fid in frag.exercised_closure:
                bucket[fid] = bucket.get(fid, 0) + 1
    scores = dict(failing)
    for fid in list(scores):
        tvo = tvos.get(fid)
        if tvo is not None and tvo.graal_outcome == "graal-success":
            del scores[fid]
        elif exclude and fid in exclude:
            del scores[fid]
    ranked = sorted(
        scores,
        key=lambda fid: (-scores[fid], passing.get(fid, 0), -positions.get(fid, 0), fid))
    # later translation order ranks higher on ties: positions are ascending in
    # translation order, so larger position = later = more suspicious
    return SuspiciousnessRanking(scores=scores, passing=passing, topk=topk, ranked=ranked)
