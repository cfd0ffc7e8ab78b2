"""Standalone driver executed inside the target project to run one chain.

Runs the chain's fragment test methods in increasing index order on a fresh
TestCase instance each (setUp included), stops at the first failure, and
prints one JSON line per fragment:

    {"index": 0, "status": "pass|fail|error|skipped",
     "kind": "assertion_failure|runtime_error|null", "message": "...", "trace": "..."}

Invoked as:  python chaindriver.py <module> <class> <method-prefix> <count> [--no-stop]

A fresh interpreter per chain prevents module-state bleed between chains;
within a chain, cumulative fragments re-run their shared prefix anyway.
"""

from __future__ import annotations

import importlib
import json
import sys
import traceback


def run_chain(module_name: str, class_name: str, prefix: str, count: int,
              stop_on_failure: bool = True) -> int:
    try:
        module = importlib.import_module(module_name)
        test_class = getattr(module, class_name)
    except Exception as exc:  # import/attribute problems poison the whole chain
        for index in range(count):
            print(json.dumps({"index": index, "status": "error", "kind": "runtime_error",
                              "message": f"driver could not load {module_name}.{class_name}: {exc}",
                              "trace": traceback.format_exc()}))
        return 1

    failed = False
    for index in range(count):
        if failed and stop_on_failure:
            print(json.dumps({"index": index, "status": "skipped", "kind": None,
                              "message": "", "trace": ""}))
            continue
        record = {"index": index, "status": "pass", "kind": None, "message": "", "trace": ""}
        try:
            instance = test_class(f"{prefix}{index}") if _takes_name(test_class) \
                else test_class()
            if hasattr(instance, "setUp"):
                instance.setUp()
            getattr(instance, f"{prefix}{index}")()
        except AssertionError as exc:
            record.update(status="fail", kind="assertion_failure", message=str(exc),
                          trace=traceback.format_exc())
            failed = True
        except Exception as exc:
            record.update(status="error", kind="runtime_error",
                          message=f"{type(exc).__name__}: {exc}",
                          trace=traceback.format_exc())
            failed = True
        print(json.dumps(record))
    return 1 if failed else 0


def _takes_name(test_class) -> bool:
    import unittest

    return issubclass(test_class, unittest.TestCase)


if __name__ == "__main__":
    module_name, class_name, prefix = sys.argv[1], sys.argv[2], sys.argv[3]
    count = int(sys.argv[4])
    sys.exit(run_chain(module_name, class_name, prefix, count,
                       stop_on_failure="--no-stop" not in sys.argv[5:]))
