"""Upward scan of the connector length N′ over a batch of endpoint/seed pairs."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from assembly.base import BaseConnector, ConnectorResult
from construction import ConstructionParams
from core import working_precision
from core.errors import ConnectorNotFound, LabError
from lattice import LatticeClass
from utils.pool import WorkerPool

log = logging.getLogger("cusplab.assembly.scan")

TARGET_RATE = 0.99


@dataclass(frozen=True)
class PairOutcome:
    index: int
    nprime: int
    success: bool
    dist_start: float | None = None
    dist_end: float | None = None
    iterations: int | None = None
    error: str | None = None


class _PairSearch:
    def __init__(self, connector: BaseConnector, p: ConstructionParams, nprime: int,
                 tol: float | None) -> None:
        self.connector, self.p, self.nprime, self.tol = connector, p, nprime, tol

    def __call__(self, item: tuple[int, tuple[LatticeClass, LatticeClass]]) -> PairOutcome:
        index, (x, y) = item
        try:
            result: ConnectorResult = self.connector.find(
                x, y, self.p, tol=self.tol, nprime=self.nprime
            )
        except ConnectorNotFound as exc:
            log.debug("Pair %d at N′ = %d: %s", index, self.nprime, exc)
            return PairOutcome(index, self.nprime, False, error=str(exc))
        except LabError as exc:
            return PairOutcome(index, self.nprime, False, error=f"{type(exc).__name__}: {exc}")
        return PairOutcome(
            index,
            self.nprime,
            True,
            dist_start=float(result.dist_start),
            dist_end=float(result.dist_end),
            iterations=result.iterations,
        )


def scan_nprime(
    pairs: list[tuple[LatticeClass, LatticeClass]],
    p: ConstructionParams,
    n_min: int,
    n_max: int,
    connector: BaseConnector | None = None,
    tol: float | None = None,
    pool: WorkerPool | None = None,
    target: float = TARGET_RATE,
) -> tuple[int, float, list[PairOutcome]]:
    """Smallest N′ in [n_min, n_max] whose connector success rate over pairs reaches target.

    Each pair is (x, y): the connector must start near y and arrive near x.

    Returns:
        (nprime, success_rate, outcomes at that nprime).

    Raises:
        ConnectorNotFound: if no N′ in the range reaches the target rate.
    """
    if not pairs:
        raise ValueError("scan_nprime needs at least one pair")
    if not 1 <= n_min <= n_max:
        raise ValueError(f"Invalid N′ range [{n_min}, {n_max}]")
    if connector is None:
        from assembly import get_connector
        connector = get_connector({})
    pool = pool or WorkerPool()

    best_rate, best_n = -1.0, n_min
    for nprime in range(n_min, n_max + 1):
        with working_precision(p.precision.for_horizon(nprime, p.d)):
            outcomes = pool.map(_PairSearch(connector, p, nprime, tol), list(enumerate(pairs)))
        rate = sum(o.success for o in outcomes) / len(outcomes)
        log.info("N′ = %d: %d/%d connectors (%.1f%%)",
                 nprime, sum(o.success for o in outcomes), len(outcomes), 100 * rate)
        if rate >= target:
            return nprime, rate, outcomes
        if rate > best_rate:
            best_rate, best_n = rate, nprime

    raise ConnectorNotFound(
        f"No N′ in [{n_min}, {n_max}] reached a {100 * target:.0f}% connector rate "
        f"(best {100 * best_rate:.1f}% at N′ = {best_n})"
    )
