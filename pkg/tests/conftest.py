from __future__ import annotations

from collections.abc import Callable
from pathlib import Path

import pytest

from bkernel.bkg import save_bkg
from bkernel.config import FuzzConfig
from bkernel.graph import BoundariedGraph


@pytest.fixture(autouse=True)
def _default_settings(monkeypatch: pytest.MonkeyPatch) -> None:
    """Tests run against the built-in caps whatever the shell exports."""
    for name in (
        "BKERNEL_ORACLE_CAP",
        "BKERNEL_CE_CAP",
        "BKERNEL_ISO_CAP",
        "BKERNEL_TD_CAP",
        "BKERNEL_VERDICT_DB",
        "BKERNEL_LOG_LEVEL",
    ):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("BKERNEL_WORKERS", "1")


@pytest.fixture
def small_config() -> Callable[..., FuzzConfig]:
    """A campaign small enough for the default test run."""

    def make(problem: str, param: str, **overrides: object) -> FuzzConfig:
        data: dict[str, object] = {
            "problem": problem,
            "param": param,
            "seed": 7,
            "instances": 12,
            "attachments": 6,
            "max_n": 8,
            "max_boundary": 2,
            "max_k": 2,
            "max_fresh": 2,
            "exhaustive_fresh": 1,
            "exhaustive_boundary": 1,
        }
        data.update(overrides)
        return FuzzConfig.model_validate(data)

    return make


@pytest.fixture
def write_bkg_file(tmp_path: Path) -> Callable[[str, BoundariedGraph], Path]:
    def write(name: str, g: BoundariedGraph) -> Path:
        path = tmp_path / name
        save_bkg(path, g)
        return path

    return write
