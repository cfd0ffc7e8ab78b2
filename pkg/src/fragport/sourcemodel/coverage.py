"""Coverage collection by running the source test suite as a subprocess."""

from __future__ import annotations

import json
import subprocess
import sys
import tempfile
from pathlib import Path

from fragport.errors import TestRunFailure
from fragport.sourcemodel.model import Schema, SourceRepo

RUNNER_MODULE = "fragport.javamini.runner"


def collect_coverage(repo: SourceRepo, schema: Schema, timeout: int = 300) -> Schema:
    """Populates schema.coverage (fragment id -> hit count) and the per-test map.

    The source suite must be green; a red suite raises TestRunFailure with the
    runner log attached.
    """
    with tempfile.TemporaryDirectory(prefix="fragport-cov-") as tmp:
        xml_out = Path(tmp) / "report.xml"
        cov_out = Path(tmp) / "coverage.json"
        proc = subprocess.run(
            [sys.executable, "-m", RUNNER_MODULE,
             "--repo", str(repo.root_path),
             "--xml-out", str(xml_out),
             "--coverage-out", str(cov_out)],
            capture_output=True, text=True, timeout=timeout,
        )
        if proc.returncode != 0:
            raise TestRunFailure("source test run not green during coverage collection",
                                 log=proc.stdout + proc.stderr)
        raw = json.loads(cov_out.read_text(encoding="utf-8"))

    by_sig = schema.by_qualified_signature()
    coverage = {f.id: 0 for f in schema.fragments}
    for sig, hits in raw["hits"].items():
        frag = by_sig.get(sig)
        if frag is not None:
            coverage[frag.id] = hits
    by_test: dict[str, list[str]] = {}
    for test_sig_base, sigs in raw["per_test"].items():
        # runner test ids are "pkg.Cls#method"; fragments key by full signature
        test_frag = by_sig.get(f"{test_sig_base}()")
        key = test_frag.id if test_frag is not None else test_sig_base
        by_test[key] = sorted({by_sig[s].id for s in sigs if s in by_sig})
    schema.coverage = coverage
    schema.coverage_by_test = by_test
    return schema
