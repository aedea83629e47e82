"""Order-preserving worker pool for data-parallel scans."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

import numpy as np
from tqdm import tqdm

from core.precision import PrecisionConfig, activate, active

log = logging.getLogger("cusplab.utils.pool")

T = TypeVar("T")
R = TypeVar("R")


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Per-sample generator; results do not depend on the worker count."""
    return np.random.default_rng([seed, index])


def _init_worker(precision: PrecisionConfig) -> None:
    activate(precision)


class WorkerPool:
    """Maps a function over items inline (workers = 1) or in worker processes.

    Results come back in input order. Worker processes start with the
    precision that was active when the pool was created.
    """

    def __init__(self, workers: int = 1, progress: bool = False, label: str = "") -> None:
        if workers < 1:
            raise ValueError(f"workers must be >= 1, got {workers}")
        self.workers = workers
        self.progress = progress
        self.label = label

    def map(self, fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
        items = list(items)
        bar = tqdm(total=len(items), desc=self.label, disable=not self.progress, leave=False)
        try:
            if self.workers == 1 or len(items) < 2:
                out = []
                for item in items:
                    out.append(fn(item))
                    bar.update(1)
                return out
            log.debug("Mapping %d items over %d workers", len(items), self.workers)
            with ProcessPoolExecutor(
                max_workers=self.workers,
                initializer=_init_worker,
                initargs=(active(),),
            ) as executor:
                out = []
                chunk = max(1, len(items) // (4 * self.workers))
                for result in executor.map(fn, items, chunksize=chunk):
                    out.append(result)
                    bar.update(1)
                return out
        finally:
            bar.close()


def sample_pairs(n: int, cap: int | None, seed: int) -> list[tuple[int, int]]:
    """All index pairs i < j, or a seeded uniform sample of `cap` of them."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if cap is None or len(pairs) <= cap:
        return pairs
    picks = np.random.default_rng([seed, n]).choice(len(pairs), size=cap, replace=False)
    return [pairs[k] for k in sorted(int(x) for x in picks)]
