"""One CSV row per command in summary.csv."""

from __future__ import annotations

import csv
import os

from core import plain

SUMMARY_FILE = "summary.csv"
BASE_COLUMNS = ["command", "records", "violations", "exit_code"]


class SummaryWriter:
    """Appends command rows to summary.csv, widening the header when new columns appear."""

    def __init__(self, out_dir: str) -> None:
        os.makedirs(out_dir, exist_ok=True)
        self.path = os.path.join(out_dir, SUMMARY_FILE)

    def read(self) -> list[dict]:
        if not os.path.exists(self.path):
            return []
        with open(self.path, newline="", encoding="utf-8") as f:
            return list(csv.DictReader(f))

    def write(self, command: str, records: int, violations: int, exit_code: int,
              **extra) -> dict:
        row = {"command": command, "records": records, "violations": violations,
               "exit_code": exit_code}
        row.update({k: v for k, v in plain(extra).items() if not isinstance(v, (list, dict))})
        rows = self.read() + [row]
        columns = list(BASE_COLUMNS)
        for r in rows:
            for key in sorted(r):
                if key not in columns:
                    columns.append(key)
        with open(self.path, "w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(f, fieldnames=columns, restval="")
            writer.writeheader()
            writer.writerows(rows)
        return row
