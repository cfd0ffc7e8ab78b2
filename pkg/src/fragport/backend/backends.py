"""Completion backends: HTTP chat endpoint, replay cache, mock stub.

All backends are safe to call concurrently. The replay cache is
bit-deterministic: the same (fragment id, attempt, prompt hash) always
returns the same stored completion. Cache entries are JSON files carrying
the fragment id inside the document (filenames are free-form); an entry may
omit `prompt_hash`, in which case any prompt matches; strict mode turns a
hash mismatch or a missing entry into CacheMiss.
"""

from __future__ import annotations

import json
import logging
import os
import time
from pathlib import Path

from fragport.errors import BackendError, CacheMiss
from fragport.backend.prompt import PromptBundle

logger = logging.getLogger(__name__)


class Backend:
    kind = "abstract"

    def complete(self, bundle: PromptBundle, attempt: int = 0) -> str:
        raise NotImplementedError


class HttpChatBackend(Backend):
    """JSON chat-completions wire format; endpoint/model/key from config/env."""

    kind = "http_chat"

    def __init__(self, endpoint: str, model: str, api_key_env: str = "FRAGPORT_API_KEY",
                 temperature: float = 0.0, timeout: int = 120, retries: int = 2):
        self.endpoint = endpoint
        self.model = model
        self.api_key = os.environ.get(api_key_env, "")
        self.temperature = temperature
        self.timeout = timeout
        self.retries = retries

    def complete(self, bundle: PromptBundle, attempt: int = 0) -> str:
        import requests

        payload = {
            "model": self.model,
            "messages": [{"role": "user", "content": bundle.render()}],
            "temperature": self.temperature,
        }
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        last_error: Exception | None = None
        for i in range(self.retries + 1):
            try:
                resp = requests.post(self.endpoint, json=payload, headers=headers,
                                     timeout=self.timeout)
                resp.raise_for_status()
                data = resp.json()
                return data["choices"][0]["message"]["content"]
            except (requests.RequestException, KeyError, IndexError, ValueError) as exc:
                last_error = exc
                if i < self.retries:
                    time.sleep(min(2 ** i, 8))
        raise BackendError(f"chat completion failed after {self.retries + 1} attempts: {last_error}")


class ReplayCacheBackend(Backend):
    """Deterministic playback from a directory of JSON completion files."""

    kind = "replay_cache"

    def __init__(self, cache_dir: str | Path, strict: bool = False):
        self.cache_dir = Path(cache_dir)
        self.strict = strict
        self._index: dict[tuple[str, int | None], dict] | None = None

    def _load_index(self) -> dict[tuple[str, int | None], dict]:
        if self._index is None:
            index: dict[tuple[str, int | None], dict] = {}
            if not self.cache_dir.is_dir():
                raise CacheMiss(f"replay cache directory {self.cache_dir} does not exist")
            for path in sorted(self.cache_dir.glob("*.json")):
                entry = json.loads(path.read_text(encoding="utf-8"))
                key = (entry["fragment_id"], entry.get("attempt"))
                index[key] = entry
            self._index = index
        return self._index

    def complete(self, bundle: PromptBundle, attempt: int = 0) -> str:
        index = self._load_index()
        entry = index.get((bundle.fragment_id, attempt)) or index.get((bundle.fragment_id, None))
        if entry is None:
            raise CacheMiss(f"no replay entry for {bundle.fragment_id} (attempt {attempt})")
        stored_hash = entry.get("prompt_hash")
        if stored_hash is not None and stored_hash != bundle.prompt_hash:
            message = (f"prompt hash mismatch for {bundle.fragment_id}: cache has "
                       f"{stored_hash}, current prompt is {bundle.prompt_hash}")
            if self.strict:
                raise CacheMiss(message)
            logger.warning("%s (stale template tolerated in non-strict mode)", message)
        return entry["completion"]


class MockStubBackend(Backend):
    """Returns canned completions; defaults to echoing the fragment's stub."""

    kind = "mock_stub"

    def __init__(self, per_fragment: dict[str, str] | None = None,
                 fixed: str | None = None):
        self.per_fragment = per_fragment or {}
        self.fixed = fixed

    def complete(self, bundle: PromptBundle, attempt: int = 0) -> str:
        if bundle.fragment_id in self.per_fragment:
            return self.per_fragment[bundle.fragment_id]
        if self.fixed is not None:
            return self.fixed
        return f"```python\n{bundle.stub_code}\n```"


def complete(bundle: PromptBundle, backend: Backend, attempt: int = 0) -> str:
    return backend.complete(bundle, attempt)
