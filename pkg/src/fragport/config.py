"""Run configuration: INI file plus command-line overrides."""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from fragport.errors import ConfigError


@dataclass
class RunConfig:
    repo: Path | None = None
    build_descriptor: Path | None = None      # defaults to <repo>/build.json
    work: Path = Path("work")
    backend_kind: str = "replay"           # replay | http_chat | mock
    cache_dir: Path | None = None
    strict_replay: bool = False
    endpoint: str = ""
    model: str = ""
    api_key_env: str = "FRAGPORT_API_KEY"
    context_limit: int = 16384
    min_budget: int = 3
    max_budget: int = 5
    topk: int = 3
    isolation_enabled: bool = False
    isolation_command: str = ""
    extras: dict = field(default_factory=dict)

    def validate(self, require_repo: bool = True) -> None:
        if not 0 < self.min_budget <= self.max_budget:
            raise ConfigError(
                f"budgets must satisfy 0 < min <= max; got {self.min_budget}..{self.max_budget}")
        if self.topk < 1:
            raise ConfigError("topk must be at least 1")
        if require_repo:
            if self.repo is None or not Path(self.repo).is_dir():
                raise ConfigError(f"repo path does not exist: {self.repo}")
            descriptor = self.build_descriptor or Path(self.repo) / "build.json"
            if not descriptor.is_file():
                raise ConfigError(f"build descriptor does not exist: {descriptor}")
        if self.backend_kind not in ("replay", "http_chat", "mock"):
            raise ConfigError(f"unknown backend kind {self.backend_kind!r}")
        if self.backend_kind == "replay" and self.cache_dir is not None \
                and not Path(self.cache_dir).is_dir():
            raise ConfigError(f"replay cache directory does not exist: {self.cache_dir}")
        if self.backend_kind == "http_chat" and not self.endpoint:
            raise ConfigError("http_chat backend requires an endpoint")


def load_config(path: str | Path | None) -> RunConfig:
    config = RunConfig()
    if path is None:
        return config
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    paths = parser["paths"] if parser.has_section("paths") else {}
    if "repo" in paths:
        config.repo = Path(paths["repo"])
    if "build_descriptor" in paths:
        config.build_descriptor = Path(paths["build_descriptor"])
    if "work" in paths:
        config.work = Path(paths["work"])
    backend = parser["backend"] if parser.has_section("backend") else {}
    config.backend_kind = backend.get("kind", config.backend_kind)
    if "cache_dir" in backend:
        config.cache_dir = Path(backend["cache_dir"])
    config.strict_replay = _truthy(backend.get("strict", "false"))
    config.endpoint = backend.get("endpoint", config.endpoint)
    config.model = backend.get("model", config.model)
    config.api_key_env = backend.get("api_key_env", config.api_key_env)
    config.context_limit = int(backend.get("context_limit", config.context_limit))
    budgets = parser["budgets"] if parser.has_section("budgets") else {}
    config.min_budget = int(budgets.get("min", config.min_budget))
    config.max_budget = int(budgets.get("max", config.max_budget))
    config.topk = int(budgets.get("topk", config.topk))
    isolation = parser["isolation"] if parser.has_section("isolation") else {}
    config.isolation_enabled = _truthy(isolation.get("enabled", "false"))
    config.isolation_command = isolation.get("command", "")
    return config


def _truthy(text: str) -> bool:
    return str(text).strip().lower() in ("1", "true", "yes", "on")
