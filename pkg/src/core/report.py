"""Verification reports: check outcomes carried as data."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import mpmath


def plain(value: Any) -> Any:
    """Convert mpf and numpy scalars to JSON-friendly Python values."""
    if isinstance(value, mpmath.mpf):
        return float(value)
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, dict):
        return {k: plain(v) for k, v in value.items()}
    if hasattr(value, "item"):
        return value.item()
    return value


@dataclass
class Report:
    """Ordered check records for one verification run."""

    name: str
    records: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def check(self, anchor: str, kind: str, ok: bool, **fields) -> bool:
        """Record one inequality check; `anchor` names the statement it tests."""
        record = {"anchor": anchor, "kind": kind, "ok": bool(ok)}
        record.update(plain(fields))
        self.records.append(record)
        return bool(ok)

    def note(self, kind: str, **fields) -> None:
        """Record a measurement that is not itself a pass/fail check."""
        record = {"anchor": None, "kind": kind, "ok": True}
        record.update(plain(fields))
        self.records.append(record)

    @property
    def violations(self) -> list[dict]:
        return [r for r in self.records if not r["ok"]]

    @property
    def passed(self) -> bool:
        return not self.violations

    def count(self, kind: str) -> int:
        return sum(1 for r in self.records if r["kind"] == kind)

    def merge(self, other: Report) -> None:
        self.records.extend(other.records)
