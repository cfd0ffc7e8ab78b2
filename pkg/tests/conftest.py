"""Shared fixtures: prepared pipeline stages over the bundled mini repo.

The expensive stage runs (transform, coverage, skeleton, full replay
translation) are session-scoped; tests share their artifacts read-only or
copy them when they mutate.
"""

from __future__ import annotations

import shutil
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracle_utils import write_replay_cache  # noqa: E402

from fragport.backend.backends import ReplayCacheBackend  # noqa: E402
from fragport.pipeline import (  # noqa: E402
    WorkDir, stage_analyze, stage_decompose, stage_skeleton, stage_transform,
    stage_typemap, stage_translate,
)
from fragport.sourcemodel.model import SourceRepo  # noqa: E402
from fragport.sourcemodel.store import load_schema  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"
MINIREPO = FIXTURES / "minirepo"
MANIFEST = FIXTURES / "minirepo_manifest.json"


@pytest.fixture(scope="session")
def minirepo() -> SourceRepo:
    return SourceRepo.at(MINIREPO)


@pytest.fixture(scope="session")
def prepared_work(tmp_path_factory) -> WorkDir:
    """transform + analyze(+coverage) + decompose + typemap + skeleton."""
    work = WorkDir(tmp_path_factory.mktemp("prepared"))
    stage_transform(SourceRepo.at(MINIREPO), work)
    stage_analyze(work)
    stage_decompose(work)
    stage_typemap(work)
    status = stage_skeleton(work)
    assert all(status.values()), f"skeleton validation failed: {status}"
    return work


@pytest.fixture(scope="session")
def prepared_schema(prepared_work):
    return load_schema(prepared_work.schema_path)


def clone_work(work: WorkDir, dest: Path) -> WorkDir:
    shutil.copytree(work.root, dest)
    return WorkDir(dest)


@pytest.fixture(scope="session")
def replay_run(prepared_work, prepared_schema, tmp_path_factory):
    """Full replay-oracle translation over a private copy of the work dir."""
    work = clone_work(prepared_work, tmp_path_factory.mktemp("replay") / "work")
    cache = write_replay_cache(prepared_schema, work.root / "cache")
    tvos = stage_translate(work, ReplayCacheBackend(cache))
    return work, tvos


@pytest.fixture(scope="session")
def seeded_fault_run(prepared_work, prepared_schema, tmp_path_factory):
    """Replay run with exactly one corrupted oracle entry (Catalog.add0)."""
    work = clone_work(prepared_work, tmp_path_factory.mktemp("seeded") / "work")
    # classic mangling slip: the private fields lose their underscores, so
    # every call errors out before any assertion runs
    corrupt = {
        "minilib.core.Catalog#add0(String)":
            "def add0(self, name: str) -> None:\n"
            "    self.names.append(name)\n"
            "    self.registry.register(name)",
    }
    cache = write_replay_cache(prepared_schema, work.root / "cache", corrupt=corrupt)
    tvos = stage_translate(work, ReplayCacheBackend(cache))
    return work, tvos
