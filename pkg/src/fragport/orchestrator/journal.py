"""Append-only progress journal (JSON lines) enabling resume-after-crash."""

from __future__ import annotations

import json
import time
from pathlib import Path

from fragport.orchestrator.tvo import TVO


class Journal:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)

    def append(self, event: dict) -> None:
        event = dict(event)
        event.setdefault("time", time.time())
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, sort_keys=True) + "\n")

    def events(self) -> list[dict]:
        if not self.path.is_file():
            return []
        out = []
        for line in self.path.read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if line:
                out.append(json.loads(line))
        return out

    # -- structured appends -------------------------------------------------

    def attempt(self, fragment_id: str, attempt: int, prompt_hash: str, outcome: str,
                feedback: str | None, code: str | None) -> None:
        self.append({"event": "attempt", "fragment": fragment_id, "attempt": attempt,
                     "prompt_hash": prompt_hash, "outcome": outcome,
                     "feedback": feedback, "code": code})

    def isolation(self, fragment_id: str, label: str, log: str) -> None:
        self.append({"event": "isolation", "fragment": fragment_id,
                     "label": label, "log": log})

    def chain_run(self, chain_id: str, prefix_end: int, trigger: str | None,
                  results: list, exercised: dict[str, list[str]]) -> None:
        self.append({
            "event": "chain", "chain": chain_id, "prefix_end": prefix_end,
            "trigger": trigger,
            "results": [{"test_id": c.test_id, "status": c.status,
                         "kind": c.failure_kind, "message": c.message,
                         "trace": c.trace} for c in results],
            "exercised": exercised,
        })

    def tvo(self, tvo: TVO) -> None:
        self.append({"event": "tvo", **tvo.to_dict()})

    # -- resume -------------------------------------------------------------

    def completed_tvos(self) -> dict[str, TVO]:
        done: dict[str, TVO] = {}
        for event in self.events():
            if event.get("event") == "tvo":
                data = {k: event[k] for k in
                        ("fragment_id", "syntax_outcome", "graal_outcome",
                         "test_outcome", "attempts")}
                done[data["fragment_id"]] = TVO.from_dict(data)
        return done

    def latest_chain_runs(self) -> dict[str, dict]:
        runs: dict[str, dict] = {}
        for event in self.events():
            if event.get("event") == "chain":
                runs[event["chain"]] = event
        return runs
