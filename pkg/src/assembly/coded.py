"""Coded points x_{i₁…i_m} and their recursive construction.

A coded point keeps the representative of its first seed together with the
unstable corrections applied at later times. The correction u applied at time
P enters the base representative as a^P·u·a^{-P}, so the representative is
always composed forward and T is never iterated backwards.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import mpmath

from assembly.base import BaseConnector, ConnectorResult
from construction import ConstructionParams, SeedSet
from core import GroupElement, sup_dev, working_precision
from core.errors import BudgetExceeded
from flow import OrbitRecord, conjugate_by_flow, orbit_heights, scale_columns
from geometry import quotient_dist
from lattice import LatticeClass, lattice_class
from shadowing import shadow_point, unstable_element
from utils.pool import WorkerPool

log = logging.getLogger("cusplab.assembly")

DEFAULT_BUILD_BUDGET = 10_000


@dataclass(frozen=True)
class Correction:
    time: int  # orbit time at which u⁺ is applied
    element: GroupElement  # the unstable element u⁺

    def at_base(self) -> GroupElement:
        """a^P·u·a^{-P}."""
        return conjugate_by_flow(self.element, -self.time)


@dataclass
class CodedPoint:
    word: tuple[int, ...]
    seed_rep: GroupElement  # g of the first symbol's seed
    corrections: list[Correction] = field(default_factory=list)
    base_rep: GroupElement | None = None
    lattice: LatticeClass | None = None
    centralizers: list[GroupElement] = field(default_factory=list)  # c_j, one per append
    connectors: list[dict] = field(default_factory=list)
    refinement: mpmath.mpf | None = None  # d(x_w, x_{wj}) to the parent
    orbit: OrbitRecord | None = None

    @classmethod
    def from_seed(cls, seeds: SeedSet, j: int) -> CodedPoint:
        seed = seeds.symbol(j)
        return cls(word=(j,), seed_rep=seed.g, base_rep=seed.g, lattice=seed.lattice)

    @property
    def m(self) -> int:
        return len(self.word)

    def replay(self) -> GroupElement:
        """Re-evaluate seed_rep·∏ a^{P_k}·u_k·a^{-P_k}."""
        rep = self.seed_rep
        for corr in self.corrections:
            rep = rep @ corr.at_base()
        return rep

    def replay_error(self, p: ConstructionParams) -> mpmath.mpf:
        return quotient_dist(lattice_class(self.replay()), self.lattice, p.metric)

    def ensure_orbit(self, p: ConstructionParams) -> OrbitRecord:
        if self.orbit is None:
            threshold = p.M / (p.c0 + 1)
            self.orbit = orbit_heights(self.lattice, 0, p.horizon(self.m), threshold, p.tol)
        return self.orbit


def second_shadow_eps(p: ConstructionParams) -> float:
    """δ/(c₀²·3⁷)."""
    return p.delta / (p.c0**2 * 3**7)


def centralizer_bound(p: ConstructionParams) -> float:
    """δ/(c₀·3⁶)."""
    return p.delta / (p.c0 * 3**6)


def append_symbol(
    xw: CodedPoint | None,
    j: int,
    seeds: SeedSet,
    p: ConstructionParams,
    connector: BaseConnector | None = None,
    second_shadow: bool = True,
) -> CodedPoint:
    """Extend the word of xw by the symbol j.

    The endpoint e = T^{kN+(k−1)N′}(xw) is connected to the seed x_j, the
    shadowing construction is applied at e (against the connector) and N′
    steps later (against x_j), and both unstable corrections are carried back
    to the base representative.
    """
    if xw is None or not xw.word:
        return CodedPoint.from_seed(seeds, j)
    if connector is None:
        from assembly import get_connector
        connector = get_connector({})

    metric = p.metric
    k = xw.m
    L = p.horizon(k)
    target = seeds.symbol(j).lattice

    endpoint = lattice_class(scale_columns(xw.base_rep, L), validate=False)
    link: ConnectorResult = connector.find(target, endpoint, p)
    first = shadow_point(endpoint, link.z, p.connector_tol, metric)
    u1 = unstable_element(first.u_plus, p.d)
    corrections = list(xw.corrections) + [Correction(time=L, element=u1)]
    centralizers = list(xw.centralizers)

    if second_shadow:
        arrived = lattice_class(scale_columns(first.y_rep, p.Nprime), validate=False)
        second = shadow_point(arrived, target, second_shadow_eps(p), metric)
        u2 = unstable_element(second.u_plus, p.d)
        corrections.append(Correction(time=L + p.Nprime, element=u2))
        centralizers.append(second.c)

    base_rep = xw.base_rep
    for corr in corrections[len(xw.corrections):]:
        base_rep = base_rep @ corr.at_base()
    point = CodedPoint(
        word=xw.word + (j,),
        seed_rep=xw.seed_rep,
        corrections=corrections,
        base_rep=base_rep,
        lattice=lattice_class(base_rep),
        centralizers=centralizers,
        connectors=list(xw.connectors) + [{
            "nprime": link.nprime,
            "iterations": link.iterations,
            "dist_start": float(link.dist_start),
            "dist_end": float(link.dist_end),
        }],
    )
    point.refinement = quotient_dist(xw.lattice, point.lattice, metric)
    log.debug("Appended %d to %s: refinement %s, c_j %s", j, xw.word,
              mpmath.nstr(point.refinement, 4),
              mpmath.nstr(sup_dev(centralizers[-1]), 4) if centralizers else "-")
    return point


class _Append:
    def __init__(self, seeds: SeedSet, p: ConstructionParams, connector: BaseConnector) -> None:
        self.seeds, self.p, self.connector = seeds, p, connector

    def __call__(self, item: tuple[CodedPoint, int]) -> CodedPoint:
        parent, j = item
        return append_symbol(parent, j, self.seeds, self.p, self.connector)


def build_S_m(
    seeds: SeedSet,
    m: int,
    K_sub: int,
    p: ConstructionParams,
    connector: BaseConnector | None = None,
    budget: int = DEFAULT_BUILD_BUDGET,
    pool: WorkerPool | None = None,
) -> list[CodedPoint]:
    """All words of length m over {1..K_sub}, built level by level."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if not 1 <= K_sub <= len(seeds):
        raise ValueError(f"K_sub = {K_sub} outside 1..{len(seeds)}")
    if K_sub**m > budget:
        raise BudgetExceeded(f"K_sub^m = {K_sub}^{m} = {K_sub**m} exceeds the budget {budget}")
    if connector is None:
        from assembly import get_connector
        connector = get_connector({})
    pool = pool or WorkerPool()

    with working_precision(p.precision.for_horizon(p.horizon(m) + p.Nprime, p.d)):
        level = [CodedPoint.from_seed(seeds, j) for j in range(1, K_sub + 1)]
        for k in range(1, m):
            items = [(parent, j) for parent in level for j in range(1, K_sub + 1)]
            level = pool.map(_Append(seeds, p, connector), items)
            log.info("Built level %d: %d points", k + 1, len(level))
    return level
