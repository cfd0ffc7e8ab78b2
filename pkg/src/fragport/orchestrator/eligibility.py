"""Which translated test chains can validate a fragment right now.

A chain is eligible for fragment F at prefix length k+1 when F is in the
exercised closure of slice k and everything that closure touches is already
translated and parseable. The longest such prefix is the one worth running.
"""

from __future__ import annotations

from dataclasses import dataclass

from fragport.decompose.testchain import TestFragmentChain


@dataclass
class EligibleChain:
    chain: TestFragmentChain
    prefix_end: int                 # run slices 0..prefix_end inclusive


def eligible_tests(fragment_id: str, chains: list[TestFragmentChain],
                   inserted: set[str],
                   slice_cap: dict[str, int] | None = None) -> list[EligibleChain]:
    """`inserted` = application fragment ids currently translated+parseable in
    the skeleton. `slice_cap` optionally limits usable slice indices per chain
    (slices whose own translation failed cap the prefix below them)."""
    out: list[EligibleChain] = []
    for chain in chains:
        cap = len(chain.fragments) - 1
        if slice_cap is not None and chain.chain_id in slice_cap:
            cap = min(cap, slice_cap[chain.chain_id])
        best = -1
        for frag in chain.fragments:
            if frag.index > cap:
                break
            closure = set(frag.exercised_closure)
            if not closure <= inserted:
                break
            if fragment_id in closure:
                best = frag.index
        if best >= 0:
            out.append(EligibleChain(chain=chain, prefix_end=best))
    out.sort(key=lambda e: e.chain.chain_id)
    return out
