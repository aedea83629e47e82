"""Separated-set counting and entropy accounting in nats."""

from __future__ import annotations

import logging

import mpmath

from core import Report
from flow import apply_flow, check_guard
from geometry import MetricConfig, quotient_dist
from lattice import LatticeClass

log = logging.getLogger("cusplab.measures.entropy")

MAX_SCAN_N = 10**6


def _segment(x: LatticeClass, n: int) -> list[LatticeClass]:
    out = [x]
    for _ in range(n - 1):
        out.append(apply_flow(out[-1], 1))
    return out


def _separated(a: list[LatticeClass], b: list[LatticeClass], eps, metric) -> bool:
    return any(quotient_dist(x, y, metric) >= eps for x, y in zip(a, b))


def max_separated_count(
    points: list[LatticeClass],
    n: int,
    eps: float,
    metric: MetricConfig | None = None,
) -> int:
    """Size of a greedy (n, eps)-separated subset, taken in input order.

    Two points are (n, eps)-separated when d(T^i x, T^i y) ≥ eps for some
    0 ≤ i ≤ n−1. The greedy subset is maximal by inclusion, so its size is a
    lower bound for the largest separated subset.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    lattices = [pt.lattice if hasattr(pt, "word") else pt for pt in points]
    if not lattices:
        return 0
    check_guard(n - 1, lattices[0].d)
    kept: list[list[LatticeClass]] = []
    for x in lattices:
        seg = _segment(x, n)
        if all(_separated(seg, other, eps, metric) for other in kept):
            kept.append(seg)
    log.debug("Greedy (%d, %g)-separated subset: %d of %d", n, eps, len(kept), len(lattices))
    return len(kept)


def entropy_lower_bound(count: int, n: int) -> float:
    """log(count)/n."""
    if count < 1 or n < 1:
        raise ValueError(f"Need count >= 1 and n >= 1, got ({count}, {n})")
    return float(mpmath.log(count) / n)


def full_symbol_count_log(d: int, N: int) -> mpmath.mpf:
    """log ⌊e^{dN}/13⌋, evaluated without forming the integer at large N."""
    value = mpmath.floor(mpmath.exp(d * N) / 13)
    if value < 1:
        return mpmath.ninf
    return mpmath.log(value)


def preconditions(d: int, N: int, nprime: int, eps: float) -> tuple[bool, bool]:
    """(log⌊e^{dN}/13⌋/(N+N′) > d−ε, N′/(N+N′) < ε)."""
    span = N + nprime
    return (full_symbol_count_log(d, N) / span > d - eps, nprime / span < eps)


def minimal_N(d: int, N: int, nprime: int, eps: float, cap: int = MAX_SCAN_N) -> int | None:
    """Smallest N″ ≥ N meeting both preconditions for the given N′ and ε, or None."""
    for candidate in range(max(N, 1), cap + 1):
        if all(preconditions(d, candidate, nprime, eps)):
            return candidate
    return None


def entropy_accounting(d: int, N: int, K: int, nprime: int, eps: float) -> Report:
    """Evaluate the entropy and mixing-time preconditions for a run's constants.

    The outcome is recorded as notes, not violations: small N is expected to
    fail the entropy inequality, and the report then names the N that would
    satisfy it.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    report = Report(name="entropy-bound")
    span = N + nprime
    full_log = full_symbol_count_log(d, N)
    entropy_ok, mixing_ok = preconditions(d, N, nprime, eps)
    achieved = entropy_lower_bound(K, span)
    report.note("entropy_precondition", holds=bool(entropy_ok), d=d, N=N, nprime=nprime,
                eps=eps, rate=full_log / span, bound=d - eps)
    report.note("mixing_precondition", holds=bool(mixing_ok), nprime=nprime, N=N,
                fraction=nprime / span, bound=eps)
    report.note("symbol_rate", K=K, span=span, rate=achieved)
    needed = N if entropy_ok and mixing_ok else minimal_N(d, N, nprime, eps)
    report.note("minimal_N", N=needed, cap=MAX_SCAN_N)
    report.summary = {
        "entropy_precondition": bool(entropy_ok),
        "mixing_precondition": bool(mixing_ok),
        "rate": achieved,
        "full_rate": float(full_log / span),
        "minimal_N": needed,
    }
    log.info("Entropy accounting: log K/(N+N′) = %.5f, preconditions %s/%s, minimal N %s",
             achieved, entropy_ok, mixing_ok, report.summary["minimal_N"])
    return report
