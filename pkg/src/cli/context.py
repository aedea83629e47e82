"""Shared state of one CLI invocation."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from config import PARAMS_FILE, RunConfig, save_resolved_config
from construction import ConstructionParams, SeedSet
from core.errors import StateMissing
from reporting import EventWriter, SummaryWriter
from storage import RunStore
from utils.pool import WorkerPool

log = logging.getLogger("cusplab.cli")

STATE_FILE = "state.db"


@dataclass
class CommandResult:
    """What a command hands back to `execute`."""

    records: int = 0
    violations: int = 0
    summary: dict = field(default_factory=dict)


class RunContext:
    """Run directory, writers, store and worker pool for one invocation."""

    def __init__(self, cfg: RunConfig) -> None:
        self.cfg = cfg
        out = cfg.out
        out.mkdir(parents=True, exist_ok=True)
        save_resolved_config(cfg, out / PARAMS_FILE)
        self.events = EventWriter(str(out), cfg.settings)
        self.summaries = SummaryWriter(str(out))
        self.store = RunStore(str(out / STATE_FILE))
        self._pools: dict[str, WorkerPool] = {}

    def pool(self, label: str) -> WorkerPool:
        if label not in self._pools:
            self._pools[label] = WorkerPool(
                workers=self.cfg["workers"], progress=not self.cfg["quiet"], label=label
            )
        return self._pools[label]

    @property
    def params(self) -> ConstructionParams:
        """Construction constants with the certified N′ when one is stored."""
        cert = self.store.get_certificate("nprime")
        if cert is not None and cert["nprime"] != self.cfg.params.Nprime:
            log.info("Using certified N′ = %d (configured %d)",
                     cert["nprime"], self.cfg.params.Nprime)
            self.cfg = self.cfg.with_nprime(cert["nprime"])
        return self.cfg.params

    def seeds(self) -> SeedSet:
        seeds = self.store.load_seeds(self.params)
        if seeds is None:
            raise StateMissing(f"No seed set in {self.cfg.out / STATE_FILE}; run build-s1 first")
        return seeds

    def points(self, m: int):
        points = self.store.load_points(m)
        if not points:
            raise StateMissing(f"No points of length {m} stored; run build-sm first")
        return points

    def close(self) -> None:
        self.events.close()
        self.store.close()
