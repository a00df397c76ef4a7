"""SQLite verdict log for fuzz campaigns.

Append-only: every checked (instance, attachment batch) adds one row. Rows are
keyed by (seed, instance) so a replayed campaign can be compared against an
earlier one.
"""

from __future__ import annotations

import sqlite3
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .reports import EquivalenceVerdict

UTC = timezone.utc


@dataclass(frozen=True)
class VerdictRow:
    id: int
    problem: str
    param: str
    seed: int
    instance: int
    kind: str
    passed: bool
    attachment: str
    delta: int | None
    message: str
    created_at: str


def _utc_now() -> str:
    return datetime.now(UTC).isoformat()


def init_db(db_path: Path) -> None:
    db_path.parent.mkdir(parents=True, exist_ok=True)
    with sqlite3.connect(str(db_path)) as conn:
        conn.execute(
            """
            CREATE TABLE IF NOT EXISTS verdicts (
              id INTEGER PRIMARY KEY AUTOINCREMENT,
              problem TEXT NOT NULL,
              param TEXT NOT NULL,
              seed INTEGER NOT NULL,
              instance INTEGER NOT NULL,
              kind TEXT NOT NULL,
              passed INTEGER NOT NULL,
              attachment TEXT NOT NULL DEFAULT '',
              delta INTEGER,
              message TEXT NOT NULL DEFAULT '',
              created_at TEXT NOT NULL
            );
            """
        )
        conn.execute("CREATE INDEX IF NOT EXISTS idx_verdicts_passed ON verdicts(passed);")
        conn.commit()


def insert_verdict(
    db_path: Path,
    *,
    problem: str,
    param: str,
    seed: int,
    verdict: EquivalenceVerdict,
) -> int:
    with sqlite3.connect(str(db_path)) as conn:
        cur = conn.execute(
            """
            INSERT INTO verdicts
              (problem, param, seed, instance, kind, passed, attachment, delta, message, created_at)
            VALUES
              (?, ?, ?, ?, ?, ?, ?, ?, ?, ?)
            """,
            (
                problem,
                param,
                seed,
                verdict.instance,
                verdict.kind,
                int(verdict.passed),
                verdict.attachment or "",
                verdict.delta,
                verdict.message,
                _utc_now(),
            ),
        )
        conn.commit()
        lastrowid = cur.lastrowid
        if lastrowid is None:
            raise RuntimeError("sqlite did not return lastrowid")
        return int(lastrowid)


def _row(r: sqlite3.Row) -> VerdictRow:
    return VerdictRow(
        id=int(r["id"]),
        problem=str(r["problem"]),
        param=str(r["param"]),
        seed=int(r["seed"]),
        instance=int(r["instance"]),
        kind=str(r["kind"]),
        passed=bool(r["passed"]),
        attachment=str(r["attachment"]),
        delta=None if r["delta"] is None else int(r["delta"]),
        message=str(r["message"]),
        created_at=str(r["created_at"]),
    )


def list_failures(db_path: Path, *, limit: int = 50) -> list[VerdictRow]:
    with sqlite3.connect(str(db_path)) as conn:
        conn.row_factory = sqlite3.Row
        rows = conn.execute(
            "SELECT * FROM verdicts WHERE passed = 0 ORDER BY id ASC LIMIT ?",
            (limit,),
        ).fetchall()
    return [_row(r) for r in rows]


def count_verdicts(db_path: Path, *, passed: bool | None = None) -> int:
    with sqlite3.connect(str(db_path)) as conn:
        if passed is None:
            row = conn.execute("SELECT COUNT(*) FROM verdicts").fetchone()
        else:
            row = conn.execute(
                "SELECT COUNT(*) FROM verdicts WHERE passed = ?", (int(passed),)
            ).fetchone()
    return int(row[0])
