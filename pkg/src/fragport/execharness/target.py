"""Running translated test chains against the recomposed target project.

Each chain runs in a fresh interpreter subprocess via the chain driver; the
driver enforces increasing-index execution with short-circuit and reports
per-fragment status plus failure kind on stdout as JSON lines.
"""

from __future__ import annotations

import json
import os
import subprocess
import sys
from pathlib import Path

from fragport.decompose.testchain import TestFragmentChain
from fragport.errors import RunnerUnavailable
from fragport.execharness.results import TestCaseResult, TestRunResult
from fragport.skeleton.build import snake_case

DRIVER_MODULE = "fragport.execharness.chaindriver"
PER_CHAIN_TIMEOUT = 60


def chain_module_and_class(chain: TestFragmentChain) -> tuple[str, str]:
    package, _, simple = chain.class_qname.rpartition(".")
    module = "tests." + (package + "." if package else "") + "test_" + snake_case(simple)
    return module, simple


def run_chain_subprocess(project_root: str | Path, chain: TestFragmentChain,
                         timeout: int = PER_CHAIN_TIMEOUT,
                         short_circuit: bool = True,
                         prefix_end: int | None = None) -> list[TestCaseResult]:
    """Runs slices 0..prefix_end (whole chain when None) in one fresh
    interpreter."""
    project_root = Path(project_root)
    module, class_name = chain_module_and_class(chain)
    prefix = f"test_{chain.method_name}_"
    count = len(chain.fragments) if prefix_end is None else prefix_end + 1
    env = dict(os.environ)
    env["PYTHONPATH"] = str(project_root) + os.pathsep + env.get("PYTHONPATH", "")
    cmd = [sys.executable, "-m", DRIVER_MODULE, module, class_name, prefix,
           str(count)]
    if not short_circuit:
        cmd.append("--no-stop")
    try:
        proc = subprocess.run(
            cmd, capture_output=True, text=True, timeout=timeout, cwd=project_root, env=env)
    except subprocess.TimeoutExpired:
        return [TestCaseResult(chain.fragment_id(i), "error", "runtime_error",
                               f"chain timed out after {timeout}s", "")
                for i in range(count)]
    except FileNotFoundError as exc:
        raise RunnerUnavailable(f"target interpreter unavailable: {exc}")
    cases: list[TestCaseResult] = []
    for line in proc.stdout.splitlines():
        line = line.strip()
        if not line.startswith("{"):
            continue
        record = json.loads(line)
        cases.append(TestCaseResult(
            test_id=chain.fragment_id(record["index"]),
            status=record["status"],
            failure_kind=record.get("kind"),
            message=record.get("message", ""),
            trace=record.get("trace", ""),
        ))
    if len(cases) != count:
        detail = proc.stderr.strip() or "driver produced no output"
        cases = [TestCaseResult(chain.fragment_id(i), "error", "runtime_error",
                                f"driver failure: {detail}", "")
                 for i in range(count)]
    return cases


def run_target_suite(project_root: str | Path, chains: list[TestFragmentChain],
                     short_circuit: bool = True,
                     timeout: int = PER_CHAIN_TIMEOUT) -> tuple[TestRunResult, dict[str, int]]:
    """Executes every chain; returns the normalized result plus a map of
    chain id -> number of skipped fragments."""
    result = TestRunResult(suite_id=str(project_root))
    skip_map: dict[str, int] = {}
    for chain in sorted(chains, key=lambda c: c.origin_test):
        cases = run_chain_subprocess(project_root, chain, timeout=timeout,
                                     short_circuit=short_circuit)
        result.cases.extend(cases)
        skip_map[chain.chain_id] = sum(1 for c in cases if c.status == "skipped")
    return result, skip_map


def classify_failure(case: TestCaseResult) -> str:
    """assertion_failure iff the failure is the framework's assertion signal."""
    if case.status not in ("fail", "error"):
        raise ValueError(f"classify_failure on status {case.status}")
    if case.failure_kind is not None:
        return case.failure_kind
    return "assertion_failure" if "AssertionError" in case.trace else "runtime_error"
