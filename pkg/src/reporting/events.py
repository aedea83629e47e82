"""JSONL event stream for check records and command summaries."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
from datetime import datetime, timezone

from core import Report, plain

log = logging.getLogger("cusplab.reporting")

EVENTS_FILE = "events.jsonl"


def config_hash(settings: dict) -> str:
    """SHA-256 of the resolved settings in canonical JSON form."""
    canonical = json.dumps(plain(settings), sort_keys=True, default=str)
    return hashlib.sha256(canonical.encode()).hexdigest()


class EventWriter:
    """Append-only JSONL writer.

    The first line of a new stream is a header with the wall-clock time and
    config hash; every later line carries a running `seq` and sorted keys, so
    two runs with the same config produce identical bodies.
    """

    def __init__(self, out_dir: str, settings: dict | None = None) -> None:
        os.makedirs(out_dir, exist_ok=True)
        self.path = os.path.join(out_dir, EVENTS_FILE)
        self._lock = threading.Lock()
        self._seq = 0
        fresh = not os.path.exists(self.path) or os.path.getsize(self.path) == 0
        if not fresh:
            with open(self.path, encoding="utf-8") as f:
                self._seq = max(sum(1 for _ in f) - 1, 0)
        self._fh = open(self.path, "a", encoding="utf-8")
        if fresh:
            header = {
                "kind": "header",
                "started_at": datetime.now(timezone.utc).isoformat(),
                "config_hash": config_hash(settings or {}),
            }
            self._fh.write(json.dumps(header, sort_keys=True) + "\n")
            self._fh.flush()

    def emit(self, command: str, kind: str, anchor: str | None = None, **fields) -> dict:
        with self._lock:
            self._seq += 1
            record = {"seq": self._seq, "command": command, "anchor": anchor, "kind": kind}
            record.update(plain(fields))
            self._fh.write(json.dumps(record, sort_keys=True, default=str) + "\n")
            self._fh.flush()
        return record

    def emit_report(self, command: str, report: Report) -> int:
        """Write every record of a report; returns the number written."""
        for rec in report.records:
            fields = {k: v for k, v in rec.items() if k not in ("anchor", "kind")}
            self.emit(command, rec["kind"], rec["anchor"], **fields)
        return len(report.records)

    def close(self) -> None:
        with self._lock:
            if not self._fh.closed:
                self._fh.close()

    def __enter__(self) -> EventWriter:
        return self

    def __exit__(self, *exc) -> None:
        self.close()
