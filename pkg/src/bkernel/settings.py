"""Settings loader.

Loads configuration from environment variables for:
- oracle size caps (general, cluster editing, isomorphism, treedepth)
- default worker count for fuzz campaigns
- optional sqlite verdict log path
- log level
"""

from __future__ import annotations

from dataclasses import dataclass
import os
from pathlib import Path


@dataclass(frozen=True)
class OracleCaps:
    general: int = 18
    ce: int = 10
    iso: int = 12
    td: int = 20

    def raised(self, n: int) -> OracleCaps:
        """Caps lifted to at least n vertices (for callers that size their own inputs)."""
        return OracleCaps(
            general=max(self.general, n),
            ce=max(self.ce, n),
            iso=max(self.iso, n),
            td=max(self.td, n),
        )


@dataclass(frozen=True)
class Settings:
    caps: OracleCaps
    workers: int
    verdict_db: Path | None
    log_level: str


def _parse_int(raw: str | None, default: int) -> int:
    if raw is None or not raw.strip():
        return default
    return int(raw)


def load_settings() -> Settings:
    caps = OracleCaps(
        general=_parse_int(os.getenv("BKERNEL_ORACLE_CAP"), 18),
        ce=_parse_int(os.getenv("BKERNEL_CE_CAP"), 10),
        iso=_parse_int(os.getenv("BKERNEL_ISO_CAP"), 12),
        td=_parse_int(os.getenv("BKERNEL_TD_CAP"), 20),
    )
    workers = _parse_int(os.getenv("BKERNEL_WORKERS"), os.cpu_count() or 1)

    raw_db = os.getenv("BKERNEL_VERDICT_DB")
    verdict_db = Path(raw_db) if raw_db else None

    log_level = os.getenv("BKERNEL_LOG_LEVEL", "WARNING").upper()

    return Settings(
        caps=caps,
        workers=max(1, workers),
        verdict_db=verdict_db,
        log_level=log_level,
    )
