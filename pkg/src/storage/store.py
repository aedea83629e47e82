"""SQLite state shared between pipeline stages: seeds, certificates, coded points."""

from __future__ import annotations

import json
import logging
import os
import sqlite3
import threading
from datetime import datetime, timezone

import mpmath

from assembly import CodedPoint, Correction
from construction import ConstructionParams, SeedPoint, SeedSet
from core import GroupElement, active
from lattice import lattice_class

log = logging.getLogger("cusplab.storage")

_SCHEMA = """\
CREATE TABLE IF NOT EXISTS seeds (
    symbol INTEGER PRIMARY KEY,
    t TEXT NOT NULL,
    cube TEXT NOT NULL,
    basis TEXT NOT NULL
);

CREATE TABLE IF NOT EXISTS certificates (
    name TEXT PRIMARY KEY,
    value TEXT NOT NULL,
    created_at TEXT NOT NULL
);

CREATE TABLE IF NOT EXISTS coded_points (
    word TEXT PRIMARY KEY,
    m INTEGER NOT NULL,
    seed_rep TEXT NOT NULL,
    base_rep TEXT NOT NULL,
    corrections TEXT NOT NULL,
    centralizers TEXT NOT NULL,
    connectors TEXT NOT NULL,
    refinement TEXT
);

CREATE INDEX IF NOT EXISTS idx_coded_points_m ON coded_points(m);
"""


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _dump(g: GroupElement, bits: int) -> str:
    return json.dumps(g.to_strings(bits))


def _load(text: str) -> GroupElement:
    return GroupElement.from_strings(json.loads(text))


class RunStore:
    """Thread-safe SQLite storage for the state of one run directory."""

    def __init__(self, db_path: str):
        self._db_path = db_path
        self._lock = threading.Lock()

        parent = os.path.dirname(db_path)
        if parent:
            os.makedirs(parent, exist_ok=True)

        self._conn = sqlite3.connect(db_path, check_same_thread=False)
        self._conn.row_factory = sqlite3.Row
        self._conn.executescript(_SCHEMA)
        self._conn.commit()

    def close(self) -> None:
        with self._lock:
            self._conn.close()

    # --- seeds ---

    def save_seeds(self, seeds: SeedSet) -> None:
        """Replace the stored seed set."""
        bits = active().mantissa_bits
        rows = [
            (pt.index, json.dumps([mpmath.nstr(v, 40) for v in pt.t]),
             json.dumps(list(pt.cube)), _dump(pt.g, bits))
            for pt in seeds.points
        ]
        with self._lock:
            self._conn.execute("DELETE FROM seeds")
            self._conn.executemany(
                "INSERT INTO seeds (symbol, t, cube, basis) VALUES (?, ?, ?, ?)", rows
            )
            self._conn.commit()
        log.info("Stored %d seeds in %s", len(rows), self._db_path)

    def load_seeds(self, p: ConstructionParams) -> SeedSet | None:
        """The stored seed set, or None when no build-s1 has run."""
        rows = self._conn.execute("SELECT * FROM seeds ORDER BY symbol").fetchall()
        if not rows:
            return None
        points = [
            SeedPoint(
                index=r["symbol"],
                t=tuple(mpmath.mpf(v) for v in json.loads(r["t"])),
                cube=tuple(json.loads(r["cube"])),
                lattice=lattice_class(_load(r["basis"])),
            )
            for r in rows
        ]
        return SeedSet(params=p, points=points)

    # --- certificates ---

    def save_certificate(self, name: str, value: dict) -> None:
        """Store a named certificate (certified N′, δ, η) as JSON."""
        with self._lock:
            self._conn.execute(
                "INSERT OR REPLACE INTO certificates (name, value, created_at) VALUES (?, ?, ?)",
                (name, json.dumps(value, sort_keys=True), _now()),
            )
            self._conn.commit()

    def get_certificate(self, name: str) -> dict | None:
        row = self._conn.execute(
            "SELECT value FROM certificates WHERE name = ?", (name,)
        ).fetchone()
        return json.loads(row["value"]) if row else None

    # --- coded points ---

    def save_points(self, points: list[CodedPoint]) -> None:
        """Replace all stored points of the same word length."""
        if not points:
            return
        bits = active().mantissa_bits
        m = points[0].m
        rows = []
        for pt in points:
            corrections = [[c.time, c.element.to_strings(bits)] for c in pt.corrections]
            rows.append((
                json.dumps(list(pt.word)),
                pt.m,
                _dump(pt.seed_rep, bits),
                _dump(pt.base_rep, bits),
                json.dumps(corrections),
                json.dumps([c.to_strings(bits) for c in pt.centralizers]),
                json.dumps(pt.connectors, sort_keys=True),
                None if pt.refinement is None else mpmath.nstr(pt.refinement, 30),
            ))
        with self._lock:
            self._conn.execute("DELETE FROM coded_points WHERE m = ?", (m,))
            self._conn.executemany(
                "INSERT INTO coded_points "
                "(word, m, seed_rep, base_rep, corrections, centralizers, connectors, refinement) "
                "VALUES (?, ?, ?, ?, ?, ?, ?, ?)",
                rows,
            )
            self._conn.commit()
        log.info("Stored %d points of length %d", len(rows), m)

    def load_points(self, m: int) -> list[CodedPoint]:
        """Stored points of word length m in lexicographic word order."""
        rows = self._conn.execute(
            "SELECT * FROM coded_points WHERE m = ?", (m,)
        ).fetchall()
        points = []
        for r in rows:
            base_rep = _load(r["base_rep"])
            points.append(CodedPoint(
                word=tuple(json.loads(r["word"])),
                seed_rep=_load(r["seed_rep"]),
                corrections=[
                    Correction(time=t, element=GroupElement.from_strings(e))
                    for t, e in json.loads(r["corrections"])
                ],
                base_rep=base_rep,
                lattice=lattice_class(base_rep),
                centralizers=[GroupElement.from_strings(c) for c in json.loads(r["centralizers"])],
                connectors=json.loads(r["connectors"]),
                refinement=None if r["refinement"] is None else mpmath.mpf(r["refinement"]),
            ))
        points.sort(key=lambda pt: pt.word)
        return points

    def stored_lengths(self) -> list[int]:
        rows = self._conn.execute("SELECT DISTINCT m FROM coded_points ORDER BY m").fetchall()
        return [r["m"] for r in rows]
