from __future__ import annotations

from pathlib import Path

import pytest

from bkernel.reports import EquivalenceVerdict
from bkernel.verdicts import count_verdicts, init_db, insert_verdict, list_failures


@pytest.fixture
def db(tmp_path: Path) -> Path:
    path = tmp_path / "nested" / "verdicts.sqlite3"
    init_db(path)
    return path


def add(db: Path, instance: int, passed: bool, **fields: object) -> int:
    verdict = EquivalenceVerdict(instance=instance, passed=passed, **fields)
    return insert_verdict(db, problem="vc", param="fvs", seed=9, verdict=verdict)


def test_init_is_idempotent(db: Path) -> None:
    init_db(db)
    assert count_verdicts(db) == 0


def test_rows_append(db: Path) -> None:
    ids = [add(db, i, passed=i % 2 == 0) for i in range(5)]
    assert ids == sorted(ids)
    assert count_verdicts(db) == 5
    assert count_verdicts(db, passed=True) == 3
    assert count_verdicts(db, passed=False) == 2


def test_failures_keep_their_details(db: Path) -> None:
    add(db, 0, passed=True)
    add(db, 1, passed=False, attachment="bkg 1\nn 1\nb 0\n", delta=2, message="mismatch")
    add(db, 2, passed=False, kind="error", message="ValueError()")

    rows = list_failures(db)
    assert [r.instance for r in rows] == [1, 2]
    first, second = rows
    assert (first.problem, first.param, first.seed) == ("vc", "fvs", 9)
    assert first.attachment.startswith("bkg 1")
    assert first.delta == 2
    assert not first.passed
    assert second.kind == "error"
    assert second.attachment == ""
    assert second.delta is None
    assert second.created_at

    assert len(list_failures(db, limit=1)) == 1
