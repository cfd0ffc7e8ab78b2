"""Client side of the in-isolation validation harness.

The harness is an external process speaking newline-delimited JSON over
stdio: one request object per line in, one response object per line out.
When no harness is configured or the process cannot be started, every
request degrades to graal-error so the rest of the pipeline keeps working
on test-translation validation alone.

Request:  {"op": "validate", "fragment_id": ..., "signature": ...,
           "translation": ..., "covering_tests": [...], "repo": ...,
           "params": [...], "return_type": ..., "is_static": ...,
           "class_qname": ..., "work_dir": ...}
Response: {"op": "validate", "fragment_id": ..., "label": "graal-success" |
           "graal-fail" | "graal-error", "log": ..., "failing_tests": [...]}
"""

from __future__ import annotations

import json
import shlex
import subprocess

GRAAL_LABELS = ("graal-success", "graal-fail", "graal-error")


class IsolationClient:
    def available(self) -> bool:
        raise NotImplementedError

    def validate(self, request: dict) -> tuple[str, str, list[str]]:
        """-> (label, log, failing test ids)"""
        raise NotImplementedError

    def close(self) -> None:
        pass


class AbsentIsolation(IsolationClient):
    """Degraded mode: the polyglot runtime is not installed."""

    def available(self) -> bool:
        return False

    def validate(self, request: dict) -> tuple[str, str, list[str]]:
        return "graal-error", "isolation harness not configured", []


class ProcessIsolation(IsolationClient):
    """Talks to a subprocess harness over line-delimited JSON."""

    def __init__(self, command: str, cwd: str | None = None, timeout: int = 300):
        self.command = command
        self.cwd = cwd
        self.timeout = timeout
        self.proc: subprocess.Popen | None = None
        self._ok: bool | None = None

    def _ensure(self) -> bool:
        if self.proc is not None and self.proc.poll() is None:
            return True
        try:
            self.proc = subprocess.Popen(
                shlex.split(self.command), cwd=self.cwd,
                stdin=subprocess.PIPE, stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL, text=True, bufsize=1)
        except OSError:
            self.proc = None
            return False
        try:
            reply = self._roundtrip({"op": "ping"})
            return bool(reply.get("ok"))
        except Exception:
            return False

    def _roundtrip(self, request: dict) -> dict:
        assert self.proc is not None
        self.proc.stdin.write(json.dumps(request) + "\n")
        self.proc.stdin.flush()
        line = self.proc.stdout.readline()
        if not line:
            raise RuntimeError("isolation harness closed its stdout")
        return json.loads(line)

    def available(self) -> bool:
        if self._ok is None:
            self._ok = self._ensure()
        return self._ok

    def validate(self, request: dict) -> tuple[str, str, list[str]]:
        if not self.available():
            return "graal-error", "isolation harness unavailable", []
        try:
            reply = self._roundtrip({"op": "validate", **request})
        except Exception as exc:
            self._ok = None
            return "graal-error", f"harness protocol failure: {exc}", []
        label = reply.get("label", "graal-error")
        if label not in GRAAL_LABELS:
            label = "graal-error"
        return label, reply.get("log", ""), list(reply.get("failing_tests", []))

    def close(self) -> None:
        if self.proc is not None and self.proc.poll() is None:
            try:
                self.proc.stdin.write(json.dumps({"op": "shutdown"}) + "\n")
                self.proc.stdin.flush()
            except OSError:
                pass
            try:
                self.proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self.proc.kill()
        self.proc = None
