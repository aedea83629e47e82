"""Checks on m-level builds: time counts, endpoints, separation ladders, tracking."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import mpmath

from assembly.coded import CodedPoint, centralizer_bound
from construction import ConstructionParams, SeedSet
from core import Report, sup_dev, working_precision
from core.errors import CertificationFailed
from flow import apply_flow, scale_columns
from geometry import group_dist, min_displacement, quotient_dist
from lattice import LatticeClass, height
from utils.pool import WorkerPool, sample_pairs

log = logging.getLogger("cusplab.assembly.verify")

DEFAULT_PAIR_CAP = 10_000
REPLAY_TOL = 1e-10


def iii_budget(m: int, n: int, delta: float) -> float:
    """Lower bound for the time-N distance of words first differing at index n.

    δ − δ/3⁴ when n = m, δ − δ·Σ_{l=3}^{m−n+2} 3^{−l} otherwise; δ itself at m = 1.
    """
    if m == 1:
        return delta
    if n == m:
        return delta - delta / 3**4
    return delta - delta * sum(3.0**-l for l in range(3, m - n + 3))


def tracking_bound(m: int, n: int, delta: float) -> float:
    """δ·Σ_{k=3}^{m−n+3} 3^{−k} for the 0-based block n; always below δ/18."""
    return delta * sum(3.0**-k for k in range(3, m - n + 4))


def first_difference(w1: tuple[int, ...], w2: tuple[int, ...]) -> int | None:
    """1-based index of the first differing symbol."""
    for i, (a, b) in enumerate(zip(w1, w2), start=1):
        if a != b:
            return i
    return None


class _PointCheck:
    def __init__(self, seeds: SeedSet, p: ConstructionParams) -> None:
        self.seeds, self.p = seeds, p

    def __call__(self, point: CodedPoint) -> tuple[Report, CodedPoint]:
        p = self.p
        report = Report(name="verify-sm")
        m = point.m
        word = list(point.word)
        orbit = point.ensure_orbit(p)
        threshold = p.M / (p.c0 + 1)
        high = orbit.count_at_least(threshold)
        report.check("prop:main(i)", "time_count", high >= m * p.N,
                     word=word, count=high, bound=m * p.N, horizon=p.horizon(m))
        end = orbit.at(p.horizon(m)).height
        report.check("prop:main(ii)", "endpoint_height", end < 17 * p.M,
                     word=word, height=end, bound=17 * p.M)

        last_seed = self.seeds.symbol(point.word[-1]).lattice
        seed_end = height(apply_flow(last_seed, p.N))
        propagated = seed_end / (1 - mpmath.mpf(p.delta) / 3**6)
        report.check("prop:main(ii)", "endpoint_propagation", propagated < 17 * p.M,
                     word=word, seed_height=seed_end, propagated=propagated, bound=17 * p.M)

        if point.refinement is not None:
            bound = p.delta * mpmath.exp(-(m - 1)) * p.metric.slack
            report.check("prop:main", "refinement", point.refinement < bound,
                         word=word, distance=point.refinement, bound=bound)
        limit = centralizer_bound(p)
        for k, c in enumerate(point.centralizers, start=2):
            dev = sup_dev(c)
            report.check("prop:main", "centralizer", dev < limit,
                         word=word, append=k, deviation=dev, bound=limit)
        if point.corrections:
            err = point.replay_error(p)
            report.check("prop:main", "replay", err < REPLAY_TOL,
                         word=word, error=err, bound=REPLAY_TOL)
        return report, point


def verify_S_m(
    points: list[CodedPoint],
    seeds: SeedSet,
    p: ConstructionParams,
    pair_cap: int | None = DEFAULT_PAIR_CAP,
    pool: WorkerPool | None = None,
) -> Report:
    """Per-point orbit checks and the pairwise separation ladder."""
    if not points:
        raise ValueError("verify_S_m needs at least one point")
    m = points[0].m
    if any(pt.m != m for pt in points):
        raise ValueError("All points must have the same word length")
    pool = pool or WorkerPool()
    report = Report(name="verify-sm")

    with working_precision(p.precision.for_horizon(p.horizon(m) + p.Nprime, p.d)):
        checked = pool.map(_PointCheck(seeds, p), points)
        for sub, point in checked:
            report.merge(sub)
        points[:] = [point for _, point in checked]

        slack = p.metric.slack
        pairs = sample_pairs(len(points), pair_cap, p.precision.seed)
        for i, j in pairs:
            a, b = points[i], points[j]
            n = first_difference(a.word, b.word)
            if n is None:
                continue
            tau = (n - 1) * p.horizon_unit + p.N
            dist = group_dist(scale_columns(a.base_rep, tau), scale_columns(b.base_rep, tau))
            budget = iii_budget(m, n, p.delta)
            report.check("prop:main(iii)", "pair_margin", dist > budget / slack,
                         pair=[list(a.word), list(b.word)], n=n, time=tau, distance=dist,
                         bound=budget / slack, raw_bound=budget)

    report.summary = {
        "points": len(points),
        "pairs": len(pairs),
        "m": m,
        "violations": len(report.violations),
    }
    log.info("verify-sm: %d points, %d pairs, %d violations",
             len(points), len(pairs), len(report.violations))
    return report


def check_separated(
    x1: CodedPoint | LatticeClass,
    x2: CodedPoint | LatticeClass,
    n: int,
    eps: float,
    p: ConstructionParams | None = None,
) -> tuple[bool, int | None]:
    """Whether d(T^i x1, T^i x2) ≥ eps for some 0 ≤ i ≤ n, and the first such i."""
    metric = p.metric if p is not None else None
    a = x1.lattice if isinstance(x1, CodedPoint) else x1
    b = x2.lattice if isinstance(x2, CodedPoint) else x2
    for i in range(n + 1):
        if i:
            a, b = apply_flow(a, 1), apply_flow(b, 1)
        if quotient_dist(a, b, metric) >= eps:
            return True, i
    return False, None


def tracking_report(point: CodedPoint, seeds: SeedSet, p: ConstructionParams) -> Report:
    """Distance of each block of the orbit to its seed's orbit, and the height floor it gives."""
    report = Report(name="tracking")
    m = point.m
    metric = p.metric
    floor_target = p.M / (p.c0 + 1)
    shrink = p.c0 * p.delta / 18 + 1
    word = list(point.word)
    for n, symbol in enumerate(point.word):
        seed = seeds.symbol(symbol).lattice
        bound = tracking_bound(m, n, p.delta)
        here = apply_flow(point.lattice, n * p.horizon_unit)
        there = seed
        for l in range(p.N + 1):
            if l:
                here, there = apply_flow(here, 1), apply_flow(there, 1)
            dist = quotient_dist(here, there, metric)
            report.check("prop:main", "tracking", dist < bound,
                         word=word, block=n, l=l, distance=dist, bound=bound,
                         limit=p.delta / 18)
            floor = height(there) / shrink
            report.check("prop:main(i)", "height_floor", floor > floor_target,
                         word=word, block=n, l=l, floor=floor, bound=floor_target)
    return report


@dataclass(frozen=True)
class EtaCertificate:
    eta: mpmath.mpf  # half the injectivity radius certified on the orbit sample
    radius: mpmath.mpf
    M_prime: mpmath.mpf  # max orbit height over the build
    configured: float
    points: int


def certify_eta(
    points: list[CodedPoint],
    p: ConstructionParams,
    sample_cap: int = 200,
) -> EtaCertificate:
    """Certify η from the injectivity radius on the orbit sample of the build."""
    if not points:
        raise CertificationFailed("Cannot certify η without points")
    m = points[0].m
    with working_precision(p.precision.for_horizon(p.horizon(m) + p.Nprime, p.d)):
        M_prime = max(pt.ensure_orbit(p).max_height() for pt in points)
        times = list(range(p.horizon(m) + 1))
        sample: list[LatticeClass] = []
        for pt in points:
            sample.extend(apply_flow(pt.lattice, l) for l in times)
        if len(sample) > sample_cap:
            stride = len(sample) / sample_cap
            sample = [sample[int(k * stride)] for k in range(sample_cap)]
        radius = min(min_displacement(x, p.metric) / 2 for x in sample)

    cert = EtaCertificate(eta=radius / 2, radius=radius, M_prime=M_prime,
                          configured=p.eta, points=len(sample))
    log.info("Certified η = %s on %d orbit points (M′ = %s)",
             mpmath.nstr(cert.eta, 6), len(sample), mpmath.nstr(M_prime, 6))
    if p.eta > cert.eta:
        log.warning("Configured eta = %g exceeds the certified %s (M′ = %s)",
                    p.eta, mpmath.nstr(cert.eta, 6), mpmath.nstr(M_prime, 6))
    if not cert.eta < p.delta:
        raise CertificationFailed(
            f"certified η = {mpmath.nstr(cert.eta, 6)} is not below δ = {p.delta:g}"
        )
    return cert

