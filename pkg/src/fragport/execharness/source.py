"""Running the source-language test suite and parsing its XML reports."""

from __future__ import annotations

import subprocess
import sys
import tempfile
import xml.etree.ElementTree as ET
from pathlib import Path

from fragport.errors import BuildFailure
from fragport.execharness.results import TestCaseResult, TestRunResult
from fragport.sourcemodel.model import SourceRepo

RUNNER_MODULE = "fragport.javamini.runner"
DEFAULT_TIMEOUT = 300


def parse_junit_xml(path: Path) -> TestRunResult:
    root = ET.parse(path).getroot()
    suites = [root] if root.tag == "testsuite" else list(root)
    result = TestRunResult(suite_id=path.stem)
    for suite in suites:
        for case in suite.findall("testcase"):
            test_id = f"{case.get('classname')}#{case.get('name')}"
            duration = float(case.get("time", "0") or 0)
            failure = case.find("failure")
            error = case.find("error")
            if failure is not None:
                result.cases.append(TestCaseResult(
                    test_id, "fail", "assertion_failure",
                    failure.get("message", ""), failure.text or "", duration))
            elif error is not None:
                result.cases.append(TestCaseResult(
                    test_id, "error", "runtime_error",
                    error.get("message", ""), error.text or "", duration))
            else:
                result.cases.append(TestCaseResult(test_id, "pass", None, "", "", duration))
            result.duration += duration
    return result


def run_source_suite(repo: SourceRepo, selection: list[str] | None = None,
                     timeout: int = DEFAULT_TIMEOUT) -> TestRunResult:
    """Invokes the source build/test tool and parses its XML report.

    An empty selection list runs zero tests (vacuous pass). A build/parse
    problem raises BuildFailure with the tool log attached; test failures do
    not raise, they are data in the result.
    """
    with tempfile.TemporaryDirectory(prefix="fragport-src-") as tmp:
        xml_out = Path(tmp) / "report.xml"
        cmd = [sys.executable, "-m", RUNNER_MODULE,
               "--repo", str(repo.root_path), "--xml-out", str(xml_out)]
        if selection is not None:
            cmd += ["--tests", ",".join(selection) if selection else "__none__"]
        proc = subprocess.run(cmd, capture_output=True, text=True, timeout=timeout)
        if proc.returncode == 2 or not xml_out.is_file():
            raise BuildFailure(f"source build failed for {repo.root_path}",
                               log=proc.stdout + proc.stderr)
        result = parse_junit_xml(xml_out)
        result.suite_id = str(repo.root_path)
        result.log = proc.stdout
        return result
