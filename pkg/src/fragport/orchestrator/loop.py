"""Main translation-and-validation loop.

Fragments are processed in translation order (fields, then methods in
reverse call order). Each application fragment goes through an adaptive
reprompting loop: syntax gate, in-isolation check, then translated-test
execution of whatever chains became eligible; test failures trigger one
feedback reprompt of the top-K suspicious fragments. Test fragments (chain
slices, setup and helper methods) get only the syntax gate. Everything is
journaled; a crashed run resumes from the journal against the on-disk
skeleton.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from fragport.backend.backends import Backend
from fragport.backend.extract import extract_code, is_parseable
from fragport.backend.icl import ICLPool
from fragport.backend.prompt import craft_prompt
from fragport.decompose.order import TranslationOrder
from fragport.decompose.testchain import TestFragmentChain
from fragport.errors import (
    BackendError, CacheMiss, ContextOverflow, NoCode, PostInsertImportFailure,
)
from fragport.execharness.target import run_chain_subprocess
from fragport.orchestrator.budget import FEEDBACK_BUDGET, BudgetPolicy, adaptive_budget
from fragport.orchestrator.eligibility import EligibleChain, eligible_tests
from fragport.orchestrator.isolation import AbsentIsolation, IsolationClient
from fragport.orchestrator.journal import Journal
from fragport.orchestrator.suspicious import rank_suspicious
from fragport.orchestrator.tvo import TVO, Attempt
from fragport.skeleton.emit import load_manifest
from fragport.skeleton.insert import insert_fragment
from fragport.sourcemodel.model import Fragment, Schema

SYNTAX_FEEDBACK_LIMIT = 800


@dataclass
class SliceView:
    """Fragment-shaped view of one chain slice for prompting."""
    id: str
    class_qname: str
    name: str
    code: str
    kind: str = "test_method"
    callees: set = field(default_factory=set)
    annotations: list = field(default_factory=list)
    param_types: list = field(default_factory=list)
    return_type: str | None = None


class Orchestrator:
    def __init__(self, schema: Schema, chains: list[TestFragmentChain],
                 order: TranslationOrder, skeleton_root: str | Path,
                 backend: Backend, policy: BudgetPolicy, journal: Journal,
                 topk: int = 3, isolation: IsolationClient | None = None,
                 icl_pool: ICLPool | None = None, context_limit: int = 16384,
                 repo_root: str | Path | None = None, resume: bool = False):
        self.schema = schema
        self.chains = chains
        self.order = order
        self.skeleton_root = Path(skeleton_root)
        self.backend = backend
        self.policy = policy
        self.journal = journal
        self.topk = topk
        self.isolation = isolation or AbsentIsolation()
        self.icl_pool = icl_pool or ICLPool.load()
        self.context_limit = context_limit
        self.repo_root = Path(repo_root) if repo_root else None
        self.resume = resume

        self.manifest = load_manifest(self.skeleton_root)
        self.positions = {fid: i for i, fid in enumerate(order.sequence)}
        self.tvos: dict[str, TVO] = {}
        self.inserted: set[str] = set()
        self.slice_cap: dict[str, int] = {}
        self.latest_runs: dict[str, tuple[TestFragmentChain, list]] = {}
        self.suspicious_done: set[str] = set()
        self.last_code: dict[str, str] = {}
        self.covering_tests = self._covering_map()
        self.chain_by_test: dict[str, TestFragmentChain] = {c.origin_test: c for c in chains}

    # -- context -------------------------------------------------------------

    def _covering_map(self) -> dict[str, list[str]]:
        """fragment id -> source test ids (runner format) whose execution hit it."""
        covering: dict[str, list[str]] = {}
        for test_fid, covered in self.schema.coverage_by_test.items():
            try:
                frag = self.schema.fragment_by_id(test_fid)
                runner_id = f"{frag.class_qname}#{frag.name}"
            except KeyError:
                runner_id = test_fid
            for fid in covered:
                covering.setdefault(fid, []).append(runner_id)
        return {fid: sorted(tests) for fid, tests in covering.items()}

    # -- attempt plumbing ------------------------------------------------------

    def _prompt(self, fragment, feedback: str | None):
        return craft_prompt(fragment, self.schema, self.skeleton_root, self.manifest,
                            translated=self.inserted,
                            icl_example=self.icl_pool.select(fragment),
                            feedback=feedback, context_limit=self.context_limit,
                            positions=self.positions)

    def _one_attempt(self, fragment, tvo: TVO, feedback: str | None) -> tuple[str, str | None]:
        """One prompt->complete->extract->gate->insert pass.

        Returns (outcome, next_feedback); outcome one of inserted, no-code,
        non-parseable, insert-failed, backend-error, context-overflow.
        """
        import ast

        attempt_no = len(tvo.attempts)

        def record(outcome: str, note: str | None, code: str | None,
                   prompt_hash: str) -> None:
            tvo.attempts.append(Attempt(prompt_hash, outcome, note))
            self.journal.attempt(fragment.id, attempt_no, prompt_hash, outcome, note, code)

        try:
            bundle = self._prompt(fragment, feedback)
        except ContextOverflow as exc:
            record("context-overflow", str(exc), None, "")
            return "context-overflow", feedback
        try:
            completion = self.backend.complete(bundle, attempt_no)
        except (BackendError, CacheMiss) as exc:
            record("backend-error", str(exc), None, bundle.prompt_hash)
            return "backend-error", feedback
        try:
            code = extract_code(completion)
        except NoCode as exc:
            note = f"The reply contained no usable code block: {exc}"
            tvo.syntax_outcome = "non-parseable"
            record("no-code", note, None, bundle.prompt_hash)
            return "no-code", note
        if not is_parseable(code):
            note = "code does not parse"
            try:
                ast.parse(code)
            except (SyntaxError, ValueError) as exc:
                note = f"SyntaxError: {exc}"[:SYNTAX_FEEDBACK_LIMIT]
            tvo.syntax_outcome = "non-parseable"
            record("non-parseable", note, code, bundle.prompt_hash)
            return "non-parseable", note
        try:
            self.manifest = insert_fragment(self.skeleton_root, fragment.id, code,
                                            manifest=self.manifest)
        except PostInsertImportFailure as exc:
            note = f"Module import failed after insertion: {exc.log}"[:SYNTAX_FEEDBACK_LIMIT]
            tvo.syntax_outcome = "non-parseable"
            record("insert-failed", note, code, bundle.prompt_hash)
            return "insert-failed", note
        tvo.syntax_outcome = "parseable"
        record("inserted", None, code, bundle.prompt_hash)
        self.inserted.add(fragment.id)
        self.last_code[fragment.id] = code
        return "inserted", None

    # -- syntax-only fragments (fields, test slices, setup/helpers) -----------

    def _translate_syntax_only(self, fragment, budget: int) -> TVO:
        tvo = TVO(fragment.id)
        feedback = None
        while budget > 0:
            outcome, feedback = self._one_attempt(fragment, tvo, feedback)
            if outcome == "inserted":
                break
            budget -= 1
        self.tvos[fragment.id] = tvo
        self.journal.tvo(tvo)
        return tvo

    def _slice_view(self, chain: TestFragmentChain, index: int) -> SliceView:
        frag = chain.fragments[index]
        return SliceView(
            id=chain.fragment_id(index),
            class_qname=chain.class_qname,
            name=f"{chain.method_name}_{index}",
            code=frag.code,
            callees=set(frag.exercised_direct) | set(chain.setup_methods),
        )

    def _ensure_setup(self, chain: TestFragmentChain) -> bool:
        for setup_id in chain.setup_methods:
            tvo = self.tvos.get(setup_id)
            if tvo is None:
                frag = self.schema.fragment_by_id(setup_id)
                tvo = self._translate_syntax_only(frag, adaptive_budget(setup_id, self.policy))
            if tvo.syntax_outcome != "parseable":
                return False
        return True

    def _ensure_slices(self, chain: TestFragmentChain, upto: int) -> int:
        """Translates untranslated slices 0..upto; returns the last usable index."""
        if not self._ensure_setup(chain):
            self.slice_cap[chain.chain_id] = -1
            return -1
        for k in range(upto + 1):
            sid = chain.fragment_id(k)
            tvo = self.tvos.get(sid)
            if tvo is None:
                view = self._slice_view(chain, k)
                tvo = self._translate_syntax_only(view, self.policy.min_budget)
            if tvo.syntax_outcome != "parseable":
                self.slice_cap[chain.chain_id] = k - 1
                return k - 1
        return upto

    # -- application fragments -------------------------------------------------

    def _isolation_request(self, fragment: Fragment, code: str,
                           covering: list[str]) -> dict:
        return {
            "fragment_id": fragment.id,
            "signature": fragment.qualified_signature,
            "class_qname": fragment.class_qname,
            "method_name": fragment.name,
            "params": fragment.param_types,
            "return_type": fragment.return_type,
            "is_static": fragment.is_static,
            "translation": code,
            "covering_tests": covering,
            "repo": str(self.repo_root) if self.repo_root else "",
        }

    def _run_eligible(self, eligibles: list[EligibleChain], trigger: str | None,
                      ) -> list[tuple[TestFragmentChain, list]]:
        runs = []
        for item in eligibles:
            usable = self._ensure_slices(item.chain, item.prefix_end)
            if usable < 0:
                continue
            prefix_end = min(usable, item.prefix_end)
            results = run_chain_subprocess(self.skeleton_root, item.chain,
                                           prefix_end=prefix_end)
            exercised = {item.chain.fragment_id(f.index): f.exercised_closure
                         for f in item.chain.fragments[:prefix_end + 1]}
            self.journal.chain_run(item.chain.chain_id, prefix_end, trigger,
                                   results, exercised)
            self.latest_runs[item.chain.chain_id] = (item.chain, results)
            runs.append((item.chain, results))
        return runs

    def _feedback_reprompt(self, fragment_id: str, detail: str) -> None:
        if fragment_id in self.suspicious_done:
            return
        tvo = self.tvos.get(fragment_id)
        if tvo is None:
            return
        self.suspicious_done.add(fragment_id)
        frag = self.schema.fragment_by_id(fragment_id)
        for _ in range(FEEDBACK_BUDGET):
            outcome, _ = self._one_attempt(frag, tvo, detail)
            if outcome != "inserted":
                continue
            covering = self.covering_tests.get(fragment_id, [])
            if covering:
                code = self.last_code.get(fragment_id, "")
                label, log, _failing = self.isolation.validate(
                    self._isolation_request(frag, code, covering))
                self.journal.isolation(fragment_id, label, log)
                tvo.graal_outcome = label
        self.journal.tvo(tvo)

    def _process_application(self, fragment: Fragment) -> TVO:
        tvo = TVO(fragment.id)
        self.tvos[fragment.id] = tvo
        budget = adaptive_budget(fragment.id, self.policy)
        feedback: str | None = None
        covering = self.covering_tests.get(fragment.id, [])

        while budget > 0:
            outcome, feedback = self._one_attempt(fragment, tvo, feedback)
            if outcome != "inserted":
                budget -= 1
                continue
            if covering:
                code = self.last_code.get(fragment.id, "")
                label, log, _failing = self.isolation.validate(
                    self._isolation_request(fragment, code, covering))
                self.journal.isolation(fragment.id, label, log)
                if label == "graal-fail":
                    tvo.graal_outcome = "graal-fail"
                    feedback = f"In-isolation validation failed:\n{log}"[:SYNTAX_FEEDBACK_LIMIT]
                    budget -= 1
                    continue
                tvo.graal_outcome = label
            eligibles = eligible_tests(fragment.id, self.chains, self.inserted,
                                       self.slice_cap)
            if not eligibles:
                tvo.test_outcome = "not-exercised"
                break
            runs = self._run_eligible(eligibles, trigger=fragment.id)
            if not runs:
                tvo.test_outcome = "not-exercised"
                break
            failing_cases = [(chain, case) for chain, results in runs
                             for case in results if case.status in ("fail", "error")]
            if failing_cases:
                tvo.test_outcome = "test-fail"
                ranking = rank_suspicious(
                    list(self.latest_runs.values()), self.tvos, self.positions,
                    topk=self.topk,
                    exclude=self.suspicious_done | {fragment.id})
                first_chain, first_case = failing_cases[0]
                detail = (f"Translated test {first_case.test_id} {first_case.status}: "
                          f"{first_case.message}\n{first_case.trace}")[:SYNTAX_FEEDBACK_LIMIT]
                self.journal.append({
                    "event": "suspicious", "trigger": fragment.id,
                    "ranked": ranking.ranked, "scores": ranking.scores,
                    "reprompted": ranking.top()})
                for fid in ranking.top():
                    self._feedback_reprompt(fid, detail)
                feedback = detail
                budget -= 1
                continue
            tvo.test_outcome = "test-success"
            break

        self.journal.tvo(tvo)
        return tvo

    # -- top level ---------------------------------------------------------------

    def run(self) -> dict[str, TVO]:
        if self.resume:
            self.tvos = self.journal.completed_tvos()
            self.inserted = {fid for fid, tvo in self.tvos.items()
                             if tvo.syntax_outcome == "parseable"}
            for event in self.journal.events():
                if event.get("event") == "chain":
                    pass  # chain state is recomputed by the final sweep
        self.journal.append({"event": "begin", "fragments": len(self.order.sequence)})

        for fid in self.order.sequence:
            if fid in self.tvos:
                continue
            try:
                fragment = self.schema.fragment_by_id(fid)
            except KeyError:
                continue
            if fragment.kind == "field":
                self._translate_syntax_only(fragment, adaptive_budget(fid, self.policy))
            elif fragment.is_abstract:
                tvo = TVO(fid, syntax_outcome="parseable")
                self.tvos[fid] = tvo
                self.inserted.add(fid)
                self.journal.tvo(tvo)
            elif fragment.kind == "application_method":
                self._process_application(fragment)
            elif fragment.kind == "test_method":
                chain = self.chain_by_test.get(fid)
                if chain is not None:
                    self._ensure_slices(chain, len(chain.fragments) - 1)
                elif fid not in self.tvos:
                    # setup/helper methods not reached via any chain yet
                    self._translate_syntax_only(fragment, self.policy.min_budget)

        self._final_sweep()
        self.journal.append({"event": "end"})
        return self.tvos

    def _final_sweep(self) -> None:
        """Recomposition check: run every chain over its longest usable prefix."""
        for chain in sorted(self.chains, key=lambda c: c.origin_test):
            usable = self._ensure_slices(chain, len(chain.fragments) - 1)
            if usable < 0:
                continue
            runnable = -1
            for frag in chain.fragments[:usable + 1]:
                if set(frag.exercised_closure) <= self.inserted:
                    runnable = frag.index
                else:
                    break
            if runnable < 0:
                continue
            results = run_chain_subprocess(self.skeleton_root, chain, prefix_end=runnable)
            exercised = {chain.fragment_id(f.index): f.exercised_closure
                         for f in chain.fragments[:runnable + 1]}
            self.journal.chain_run(chain.chain_id, runnable, None, results, exercised)
            self.latest_runs[chain.chain_id] = (chain, results)
