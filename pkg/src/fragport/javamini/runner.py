"""Test runner / build tool for javamini source trees.

Behaves like a miniature `mvn test`:

    python -m fragport.javamini.runner --repo <dir> \
        [--xml-out report.xml] [--coverage-out coverage.json] \
        [--tests pkg.Cls#name,...] [--bridge bridge.json] [--bridge-log log.json]

  - discovers test classes under the build descriptor's test dirs
    (methods annotated @Test; @Before methods run first on a fresh instance);
  - emits a JUnit-style XML report and a coverage JSON file
    (global hit counts per method/field key plus per-test hit sets);
  - in bridge mode, one method's body is replaced by a call into a foreign
    (Python) implementation loaded from a dual project directory; marshal
    failures are written to the bridge log on a channel separate from test
    failures.

Exit codes: 0 all green, 1 test failures/errors, 2 build/load problems.
"""

from __future__ import annotations

import argparse
import importlib.util
import json
import sys
import time
from pathlib import Path

from fragport.errors import BuildDescriptorMissing, ParseError
from fragport.javamini import ast as J
from fragport.javamini.interp import (
    BridgeHook, Interpreter, JChar, JList, JmError, JmObject,
)
from fragport.javamini.parser import parse_file

BUILD_DESCRIPTOR = "build.json"


def load_build_descriptor(repo: Path) -> dict:
    desc = repo / BUILD_DESCRIPTOR
    if not desc.is_file():
        raise BuildDescriptorMissing(f"no {BUILD_DESCRIPTOR} under {repo}")
    return json.loads(desc.read_text(encoding="utf-8"))


def source_files(repo: Path, descriptor: dict) -> tuple[list[Path], list[Path]]:
    def collect(dirs: list[str]) -> list[Path]:
        files: list[Path] = []
        for d in dirs:
            root = repo / d
            if root.is_dir():
                files.extend(sorted(root.rglob("*.java")))
        return files

    return collect(descriptor.get("source_dirs", ["src/main"])), \
        collect(descriptor.get("test_dirs", ["src/test"]))


def parse_tree(repo: Path) -> tuple[list[J.CompilationUnit], list[J.CompilationUnit], dict]:
    descriptor = load_build_descriptor(repo)
    app_files, test_files = source_files(repo, descriptor)
    if not app_files and not test_files:
        raise ParseError("repository contains no source files", file=str(repo))
    app_units = [parse_file(p, str(p.relative_to(repo))) for p in app_files]
    test_units = [parse_file(p, str(p.relative_to(repo))) for p in test_files]
    return app_units, test_units, descriptor


def discover_tests(test_units: list[J.CompilationUnit]) -> list[tuple[str, str, J.MethodDecl]]:
    """Returns (class_qname, test_id, method) for every @Test method."""
    found = []
    for unit in test_units:
        for decl in unit.classes:
            qname = f"{unit.package}.{decl.name}" if unit.package else decl.name
            for m in decl.methods:
                if "Test" in m.annotations:
                    found.append((qname, f"{qname}#{m.name}", m))
    return found


class TestOutcome:
    def __init__(self, test_id: str, status: str, kind: str | None, message: str,
                 trace: str, duration: float):
        self.test_id = test_id
        self.status = status          # pass | fail | error
        self.kind = kind              # assertion_failure | runtime_error | None
        self.message = message
        self.trace = trace
        self.duration = duration


def format_trace(err: JmError) -> str:
    lines = [err.value.describe()]
    for frame in reversed(err.trace):
        lines.append(f"    at {frame}")
    return "\n".join(lines)


def run_tests(interp: Interpreter, tests: list[tuple[str, str, J.MethodDecl]],
              selection: set[str] | None) -> tuple[list[TestOutcome], dict[str, list[str]]]:
    outcomes: list[TestOutcome] = []
    per_test: dict[str, list[str]] = {}
    for class_qname, test_id, method in tests:
        if selection is not None and test_id not in selection:
            continue
        cls = interp.classes[class_qname]
        hits: set[str] = set()
        interp.current_test_hits = hits
        started = time.monotonic()
        try:
            instance = interp.instantiate(cls, [])
            for before in cls.decl.methods:
                if "Before" in before.annotations or "BeforeEach" in before.annotations:
                    interp.invoke(cls, before, instance, [])
            interp.invoke(cls, method, instance, [])
            outcomes.append(TestOutcome(test_id, "pass", None, "", "", time.monotonic() - started))
        except JmError as err:
            duration = time.monotonic() - started
            if err.is_assertion():
                outcomes.append(TestOutcome(test_id, "fail", "assertion_failure",
                                            str(err.value.fields.get("__message__", "")),
                                            format_trace(err), duration))
            else:
                outcomes.append(TestOutcome(test_id, "error", "runtime_error",
                                            err.value.describe(), format_trace(err), duration))
        finally:
            interp.current_test_hits = None
        per_test[test_id] = sorted(hits)
    return outcomes, per_test


def _xml_safe(text: str) -> str:
    # control characters are not representable in XML 1.0
    return "".join(ch if ch in "\t\n\r" or ord(ch) >= 0x20 else f"\\u{ord(ch):04x}"
                   for ch in text)


def write_xml(outcomes: list[TestOutcome], path: Path, suite_name: str) -> None:
    import xml.etree.ElementTree as ET

    suite = ET.Element("testsuite", {
        "name": suite_name,
        "tests": str(len(outcomes)),
        "failures": str(sum(1 for o in outcomes if o.status == "fail")),
        "errors": str(sum(1 for o in outcomes if o.status == "error")),
        "time": f"{sum(o.duration for o in outcomes):.3f}",
    })
    for o in outcomes:
        class_name, _, method_name = o.test_id.partition("#")
        case = ET.SubElement(suite, "testcase", {
            "classname": class_name, "name": method_name, "time": f"{o.duration:.3f}",
        })
        if o.status == "fail":
            node = ET.SubElement(case, "failure", {"type": "AssertionError",
                                                   "message": _xml_safe(o.message)})
            node.text = _xml_safe(o.trace)
        elif o.status == "error":
            node = ET.SubElement(case, "error", {"type": "RuntimeError",
                                                 "message": _xml_safe(o.message)})
            node.text = _xml_safe(o.trace)
    path.parent.mkdir(parents=True, exist_ok=True)
    ET.ElementTree(suite).write(path, encoding="unicode", xml_declaration=True)


# -- bridge mode -------------------------------------------------------------

class MarshalError(Exception):
    pass


class ListProxy:
    """Write-through view of a source-language list.

    Mutations from the translated code land in the primal list, keeping the
    two program states isomorphic for homogeneous lists of supported types.
    """

    def __init__(self, jlist: JList, bridge: "Bridge"):
        self._jlist = jlist
        self._bridge = bridge

    def append(self, value) -> None:
        self._jlist.items.append(self._bridge.from_python(value))

    def insert(self, index: int, value) -> None:
        self._jlist.items.insert(index, self._bridge.from_python(value))

    def pop(self, index: int = -1):
        return self._bridge.to_python(self._jlist.items.pop(index))

    def __getitem__(self, index):
        return self._bridge.to_python(self._jlist.items[index])

    def __setitem__(self, index, value) -> None:
        self._jlist.items[index] = self._bridge.from_python(value)

    def __len__(self) -> int:
        return len(self._jlist.items)

    def __iter__(self):
        return (self._bridge.to_python(v) for v in list(self._jlist.items))

    def __contains__(self, value) -> bool:
        needle = self._bridge.from_python(value)
        from fragport.javamini.interp import jm_equals

        return any(jm_equals(item, needle) for item in self._jlist.items)


class PrimalProxy:
    """Dual-side stand-in for a source-language object.

    Attribute reads resolve fields (with Python name-mangling undone) and
    fall back to bound method closures.
    """

    def __init__(self, obj: JmObject, bridge: "Bridge"):
        object.__setattr__(self, "_obj", obj)
        object.__setattr__(self, "_bridge", bridge)

    def __getattr__(self, name: str):
        obj: JmObject = object.__getattribute__(self, "_obj")
        bridge: Bridge = object.__getattribute__(self, "_bridge")
        for candidate in bridge.demangle(name):
            if candidate in obj.fields:
                return bridge.to_python(obj.fields[candidate])

        def call(*args):
            return bridge.call_method(obj, bridge.demangle(name)[-1], list(args))

        return call

    def __setattr__(self, name: str, value) -> None:
        obj: JmObject = object.__getattribute__(self, "_obj")
        bridge: Bridge = object.__getattribute__(self, "_bridge")
        for candidate in bridge.demangle(name):
            if candidate in obj.fields:
                obj.fields[candidate] = bridge.from_python(value)
                return
        obj.fields[bridge.demangle(name)[-1]] = bridge.from_python(value)


class Bridge:
    """Hosts the foreign implementation of one method and the casting rules."""

    def __init__(self, interp: Interpreter, config: dict, log_path: Path | None):
        self.interp = interp
        self.config = config
        self.log_path = log_path
        self.events: list[dict] = []
        self.return_type = config.get("return_type", "")
        dual_dir = config["dual_dir"]
        module_name = config.get("module", "dual_entry")
        spec = importlib.util.spec_from_file_location(module_name, Path(dual_dir) / f"{module_name}.py")
        module = importlib.util.module_from_spec(spec)
        sys.modules[module_name] = module
        spec.loader.exec_module(module)
        if hasattr(module, "bind_primal"):
            module.bind_primal(self)
        self.callable = getattr(module, config.get("callable", "invoke"))

    def log(self, event: str, detail: str) -> None:
        self.events.append({"event": event, "detail": detail})

    def flush_log(self) -> None:
        if self.log_path is not None:
            self.log_path.write_text(json.dumps({"events": self.events}, indent=2), encoding="utf-8")

    def demangle(self, name: str) -> list[str]:
        out = [name]
        if "__" in name and name.startswith("_"):
            # _Class__field -> field
            tail = name.split("__", 1)[1]
            if tail:
                out.append(tail)
        if name.startswith("_"):
            out.append(name.lstrip("_"))
        return out

    # interpreter value -> python value
    def to_python(self, value):
        if value is None or isinstance(value, (bool, int, float, str)):
            return value
        if isinstance(value, JChar):
            return value.ch
        if isinstance(value, JList):
            return ListProxy(value, self)
        if isinstance(value, JmObject):
            return PrimalProxy(value, self)
        raise MarshalError(f"unsupported outbound value of type {type(value).__name__}")

    # python value -> interpreter value
    def from_python(self, value):
        if value is None or isinstance(value, (bool, int, float, str)):
            return value
        if isinstance(value, PrimalProxy):
            return object.__getattribute__(value, "_obj")
        if isinstance(value, ListProxy):
            return value._jlist
        # generated dual wrappers hold their proxy under _proxy
        inner = getattr(value, "_proxy", None) if not isinstance(value, list) else None
        if isinstance(inner, PrimalProxy):
            return object.__getattribute__(inner, "_obj")
        if isinstance(value, list):
            boxed = JList()
            boxed.items = [self.from_python(v) for v in value]
            return boxed
        raise MarshalError(f"unsupported inbound value of type {type(value).__name__}")

    def call_method(self, obj: JmObject, name: str, args: list):
        jargs = [self.from_python(a) for a in args]
        result = self.interp.invoke_method_by_name(obj, name, jargs)
        return self.to_python(result)

    def invoke_static(self, class_qname: str, name: str, args: list):
        cls = self.interp.classes[class_qname]
        statics = [m for m in cls.methods_named(name) if m.is_static]
        decl = self.interp.pick_overload(statics, [self.from_python(a) for a in args], name)
        result = self.interp.invoke(cls, decl, None, [self.from_python(a) for a in args])
        return self.to_python(result)

    def new_object(self, class_qname: str, args: list):
        cls = self.interp.classes[class_qname]
        return self.to_python(self.interp.instantiate(cls, [self.from_python(a) for a in args]))

    def hook(self) -> BridgeHook:
        def invoke(receiver, args):
            try:
                pyargs = [self.to_python(a) for a in args]
                pyrecv = self.to_python(receiver) if receiver is not None else None
            except MarshalError as exc:
                self.log("marshal-error", str(exc))
                raise self.interp.runtime_error("UnsupportedOperationException", str(exc))
            try:
                if pyrecv is not None:
                    result = self.callable(pyrecv, *pyargs)
                else:
                    result = self.callable(*pyargs)
            except JmError:
                raise
            except MarshalError as exc:
                # raised inside proxy traffic: infrastructure, not behavior
                self.log("marshal-error", str(exc))
                raise self.interp.runtime_error("UnsupportedOperationException", str(exc))
            except AssertionError as exc:
                raise self.interp.assertion_error(str(exc))
            except Exception as exc:  # foreign failure propagates as a runtime error
                self.log("foreign-exception", f"{type(exc).__name__}: {exc}")
                raise self.interp.runtime_error("RuntimeException", f"{type(exc).__name__}: {exc}")
            try:
                value = self.from_python(result)
                if self.return_type == "char" and isinstance(value, str) and len(value) == 1:
                    value = JChar(value)
                return value
            except MarshalError as exc:
                self.log("marshal-error", str(exc))
                raise self.interp.runtime_error("UnsupportedOperationException", str(exc))

        return BridgeHook(self.config["target"], invoke)


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="javamini-runner", description=__doc__)
    ap.add_argument("--repo", required=True)
    ap.add_argument("--xml-out")
    ap.add_argument("--coverage-out")
    ap.add_argument("--tests", help="comma-separated test ids (pkg.Cls#method)")
    ap.add_argument("--bridge", help="bridge config JSON path")
    ap.add_argument("--bridge-log", help="where marshal/foreign events are written")
    args = ap.parse_args(argv)

    repo = Path(args.repo)
    try:
        app_units, test_units, _ = parse_tree(repo)
        interp = Interpreter(app_units + test_units)
        tests = discover_tests(test_units)
    except (ParseError, BuildDescriptorMissing) as exc:
        print(f"build failed: {exc}", file=sys.stderr)
        return 2

    bridge = None
    if args.bridge:
        config = json.loads(Path(args.bridge).read_text(encoding="utf-8"))
        try:
            bridge = Bridge(interp, config, Path(args.bridge_log) if args.bridge_log else None)
            interp.bridge = bridge.hook()
        except Exception as exc:
            if args.bridge_log:
                Path(args.bridge_log).write_text(
                    json.dumps({"events": [{"event": "bridge-load-error", "detail": str(exc)}]}),
                    encoding="utf-8")
            print(f"bridge setup failed: {exc}", file=sys.stderr)
            return 2

    selection = set(args.tests.split(",")) if args.tests else None
    outcomes, per_test = run_tests(interp, tests, selection)

    if args.xml_out:
        write_xml(outcomes, Path(args.xml_out), suite_name=repo.name)
    if args.coverage_out:
        cov_path = Path(args.coverage_out)
        cov_path.parent.mkdir(parents=True, exist_ok=True)
        cov_path.write_text(json.dumps({
            "hits": dict(sorted(interp.coverage.items())),
            "per_test": per_test,
        }, indent=2, sort_keys=True), encoding="utf-8")
    if bridge is not None:
        bridge.flush_log()

    failed = [o for o in outcomes if o.status != "pass"]
    for o in outcomes:
        marker = "ok" if o.status == "pass" else o.status.upper()
        print(f"{marker:5s} {o.test_id}")
    print(f"{len(outcomes)} tests, {len(failed)} not passing")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
