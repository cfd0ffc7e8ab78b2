"""Developer-facing report bundle generated from the progress journal.

Layout: reports/{metrics.json, summary.md, fragments/<safe-id>.json}. The
bundle is a pure function of the journal and schema: no timestamps or other
run-local noise, so regeneration is byte-identical.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

from fragport.metrics import compute_metrics, outcomes_from_run, percent
from fragport.orchestrator.journal import Journal
from fragport.orchestrator.suspicious import rank_suspicious
from fragport.orchestrator.tvo import TVO
from fragport.sourcemodel.model import Schema
from fragport.typemap.mapping import TypeMapping
from fragport.typemap.resolve import unresolved_types


def _safe_name(fragment_id: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]", "_", fragment_id)


def _failing(tvo: TVO) -> bool:
    return tvo.syntax_outcome != "parseable" or tvo.graal_outcome == "graal-fail" \
        or tvo.test_outcome == "test-fail"


def emit_report(journal: Journal, schema: Schema, out_dir: str | Path,
                mapping: TypeMapping | None = None) -> Path:
    out_dir = Path(out_dir)
    (out_dir / "fragments").mkdir(parents=True, exist_ok=True)

    tvos = journal.completed_tvos()
    latest_chains = journal.latest_chain_runs()
    outcomes, chain_counts = outcomes_from_run(schema, tvos, latest_chains)
    table = compute_metrics(outcomes, chain_counts)

    metrics_doc = table.as_percent_dict()
    metrics_doc.update(decomposition_stats(schema))
    if mapping is not None:
        metrics_doc["unresolved_types"] = unresolved_types(schema, mapping)
    (out_dir / "metrics.json").write_text(
        json.dumps(metrics_doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    # failing fragments: bad final labels, plus anything a failing translated
    # test exercised (the fault usually hides in the latter set);
    # ordered by suspiciousness over the final chain state
    failing_tests_of = _failing_tests_by_fragment(latest_chains)
    failing_ids = sorted(
        {fid for fid, tvo in tvos.items() if _failing(tvo)}
        | (set(failing_tests_of) & set(tvos)))
    score_order: dict[str, int] = {}
    if latest_chains:
        pseudo_runs = _chain_events_as_runs(schema, latest_chains)
        ranking = rank_suspicious(pseudo_runs, tvos,
                                  positions={}, topk=len(tvos), exclude=set())
        score_order = {fid: i for i, fid in enumerate(ranking.ranked)}
    failing_ids.sort(key=lambda fid: (score_order.get(fid, len(score_order)), fid))

    attempts_by_fragment = _attempts(journal)

    lines = ["# Translation run report", "",
             f"- application method fragments: {table.amf}",
             f"- syntax check: {percent(table.syntax_check)}%",
             f"- graal success: {percent(table.gs)}%",
             f"- test pass rate: {percent(table.tpr)}%",
             f"- failing fragments: {len(failing_ids)}", ""]
    if failing_ids:
        lines.append("## Failing fragments (most suspicious first)")
        lines.append("")
    for fid in failing_ids:
        tvo = tvos[fid]
        detail = {
            "fragment_id": fid,
            "labels": {"syntax": tvo.syntax_outcome, "graal": tvo.graal_outcome,
                       "test": tvo.test_outcome},
            "attempts": attempts_by_fragment.get(fid, []),
            "latest_translation": _latest_translation(attempts_by_fragment.get(fid, [])),
            "failing_tests": failing_tests_of.get(fid, []),
            "covering_source_tests": _covering(schema, fid),
            "coverage_hits": schema.coverage.get(fid, 0),
        }
        (out_dir / "fragments" / f"{_safe_name(fid)}.json").write_text(
            json.dumps(detail, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        lines.append(f"- `{fid}` labels={tvo.syntax_outcome}/{tvo.graal_outcome}/"
                     f"{tvo.test_outcome}, failing tests: "
                     f"{', '.join(t['test_id'] for t in failing_tests_of.get(fid, [])) or 'none'}")
    (out_dir / "summary.md").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return out_dir


def _chain_events_as_runs(schema: Schema, latest_chains: dict) -> list:
    """Adapts journal chain events to rank_suspicious inputs."""
    from fragport.decompose.testchain import TestFragmentChain
    from fragport.execharness.results import TestCaseResult

    chains = {c["origin_test"]: TestFragmentChain.from_dict(c) for c in schema.test_chains}
    runs = []
    for chain_id, event in sorted(latest_chains.items()):
        chain = chains.get(chain_id)
        if chain is None:
            continue
        results = [TestCaseResult(r["test_id"], r["status"], r.get("kind"),
                                  r.get("message", ""), r.get("trace", ""))
                   for r in event["results"]]
        # pair up with the chain's slices (prefix runs pair positionally)
        runs.append((chain, results))
    return runs


def _failing_tests_by_fragment(latest_chains: dict) -> dict[str, list[dict]]:
    failing: dict[str, list[dict]] = {}
    for event in latest_chains.values():
        exercised = event.get("exercised", {})
        for record in event["results"]:
            if record["status"] not in ("fail", "error"):
                continue
            entry = {"test_id": record["test_id"], "status": record["status"],
                     "kind": record.get("kind"), "message": record.get("message", ""),
                     "trace": record.get("trace", "")}
            for fid in exercised.get(record["test_id"], []):
                failing.setdefault(fid, []).append(entry)
    return {fid: sorted(items, key=lambda e: e["test_id"])
            for fid, items in failing.items()}


def _attempts(journal: Journal) -> dict[str, list[dict]]:
    out: dict[str, list[dict]] = {}
    for event in journal.events():
        if event.get("event") == "attempt":
            out.setdefault(event["fragment"], []).append({
                "attempt": event["attempt"], "outcome": event["outcome"],
                "prompt_hash": event["prompt_hash"], "feedback": event.get("feedback"),
                "code": event.get("code"),
            })
    return out


def _latest_translation(attempts: list[dict]) -> str | None:
    code = None
    for a in attempts:
        if a.get("code"):
            code = a["code"]
    return code


def _covering(schema: Schema, fragment_id: str) -> list[str]:
    covering = []
    for test_fid, covered in schema.coverage_by_test.items():
        if fragment_id in covered:
            covering.append(test_fid)
    return sorted(covering)


def decomposition_stats(schema: Schema) -> dict:
    """How much slicing shortens test executions: average number of
    application methods a whole test exercises versus the average over its
    decomposed fragments."""
    original: list[int] = []
    decomposed: list[int] = []
    for chain in schema.test_chains:
        fragments = chain.get("fragments", [])
        if not fragments:
            continue
        original.append(len(fragments[-1]["exercised_closure"]))
        decomposed.extend(len(f["exercised_closure"]) for f in fragments)
    if not original:
        return {}
    return {
        "decomposed_test_fragments": len(decomposed),
        "avg_methods_executed_per_test": round(sum(original) / len(original), 2),
        "avg_methods_executed_per_test_fragment":
            round(sum(decomposed) / len(decomposed), 2),
    }
