"""Distances on X = Γ\\G and injectivity checks.

The infimum over Γ is approximated by a finite candidate set of integer
matrices near g1·g2⁻¹: the entrywise rounding, every single-entry offset
within ±gamma_box, and every combination of alternatives for entries whose
fractional part is ambiguous. The identity is always included.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import mpmath
import numpy as np

from core import GroupElement, mat_inverse
from core.errors import CertificationFailed, NoUnimodularCandidate
from flow import apply_flow
from geometry.metric import MetricConfig, group_dist
from lattice import LatticeClass, integer_det

log = logging.getLogger("cusplab.geometry")

MAX_CANDIDATES = 4096
AMBIGUITY = mpmath.mpf(1) / 4
RADIUS_FLOOR = 1e-30


@dataclass(frozen=True)
class QuotientDistance:
    value: mpmath.mpf
    gamma: tuple[tuple[int, ...], ...]  # minimizing γ
    aligned: GroupElement  # γ·g2
    candidates: int
    validity_radius: mpmath.mpf  # minimizer provably in the candidate set below this

    @property
    def exact(self) -> bool:
        return self.value < self.validity_radius


def _as_int_matrix(rows) -> np.ndarray:
    return np.array([[int(x) for x in row] for row in rows], dtype=object)


def _candidate_set(
    center: list[list[int]],
    ambiguous: list[tuple[int, int, list[int]]],
    box: int,
    pairs: bool = False,
) -> list[list[list[int]]]:
    n = len(center)
    seen: set[tuple] = set()
    out: list[list[list[int]]] = []

    def add(m: list[list[int]]) -> None:
        key = tuple(tuple(r) for r in m)
        if key not in seen and len(out) < MAX_CANDIDATES:
            seen.add(key)
            out.append(m)

    add([list(r) for r in center])
    add([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    offsets = [k for k in range(-box, box + 1) if k]
    cells = [(i, j) for i in range(n) for j in range(n)]
    for i, j in cells:
        for k in offsets:
            m = [list(r) for r in center]
            m[i][j] += k
            add(m)
    if pairs:
        for (i1, j1), (i2, j2) in itertools.combinations(cells, 2):
            for k1, k2 in itertools.product(offsets, repeat=2):
                m = [list(r) for r in center]
                m[i1][j1] += k1
                m[i2][j2] += k2
                add(m)
    if ambiguous:
        for choice in itertools.product(*(alts for _, _, alts in ambiguous)):
            m = [list(r) for r in center]
            for (i, j, _), value in zip(ambiguous, choice):
                m[i][j] = value
            add(m)
    return [m for m in out if integer_det(m) == 1]


def gamma_candidates(g1: GroupElement, g2: GroupElement, box: int) -> list[list[list[int]]]:
    """Determinant-one integer matrices near g1·g2⁻¹."""
    approx = (g1 @ mat_inverse(g2)).entries
    n = approx.shape[0]
    center = [[int(mpmath.nint(approx[i, j])) for j in range(n)] for i in range(n)]
    ambiguous = []
    for i in range(n):
        for j in range(n):
            frac = abs(approx[i, j] - center[i][j])
            if frac > AMBIGUITY:
                lo = int(mpmath.floor(approx[i, j]))
                alts = sorted({lo + k for k in range(-box + 1, box + 1)})
                ambiguous.append((i, j, alts))
    return _candidate_set(center, ambiguous, box)


def validity_radius(g2: GroupElement) -> mpmath.mpf:
    """1 / (2(d+1)·max|g2⁻¹|)."""
    inv = mat_inverse(g2).entries
    worst = max(abs(x) for x in inv.flat)
    return 1 / (2 * g2.size * worst)


def quotient_distance(
    x1: LatticeClass, x2: LatticeClass, metric: MetricConfig | None = None
) -> QuotientDistance:
    """min over candidate γ of D(g1, γ·g2), with the minimizer and audit data."""
    metric = metric or MetricConfig()
    g1, g2 = x1.basis, x2.basis
    candidates = gamma_candidates(g1, g2, metric.gamma_box)
    if not candidates:
        raise NoUnimodularCandidate(
            f"No determinant-one candidate among rounded g1·g2⁻¹ (box {metric.gamma_box})"
        )
    best = None
    for gamma in candidates:
        aligned = GroupElement(_as_int_matrix(gamma)) @ g2
        dist = group_dist(g1, aligned)
        if best is None or dist < best[0]:
            best = (dist, gamma, aligned)
    value, gamma, aligned = best
    return QuotientDistance(
        value=value,
        gamma=tuple(tuple(r) for r in gamma),
        aligned=aligned,
        candidates=len(candidates),
        validity_radius=validity_radius(g2),
    )


def quotient_dist(x1: LatticeClass, x2: LatticeClass, metric: MetricConfig | None = None):
    return quotient_distance(x1, x2, metric).value


def bowen_dist(
    x1: LatticeClass, x2: LatticeClass, n: int, metric: MetricConfig | None = None
) -> tuple[mpmath.mpf, int]:
    """(max over 0 ≤ i < n of d(T^i x1, T^i x2), first time attaining it)."""
    if n < 1:
        raise ValueError(f"Bowen distance needs n >= 1, got {n}")
    best, at = mpmath.mpf(-1), 0
    a, b = x1, x2
    for i in range(n):
        if i:
            a, b = apply_flow(a, 1), apply_flow(b, 1)
        dist = quotient_dist(a, b, metric)
        if dist > best:
            best, at = dist, i
    return best, at


def min_displacement(x: LatticeClass, metric: MetricConfig | None = None) -> mpmath.mpf:
    """min over nontrivial candidate γ near the identity of D(g, γ·g)."""
    metric = metric or MetricConfig()
    g = x.reduced
    n = g.size
    eye = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    best = mpmath.inf
    for gamma in _candidate_set(eye, [], metric.gamma_box, pairs=True):
        if gamma == eye:
            continue
        dist = group_dist(g, GroupElement(_as_int_matrix(gamma)) @ g)
        if dist < best:
            best = dist
    return best


def injectivity_check(x: LatticeClass, r: float, metric: MetricConfig | None = None) -> bool:
    """True iff every nontrivial candidate γ moves x's representative by ≥ 2r."""
    if r <= 0:
        raise ValueError(f"Radius must be positive, got {r}")
    if r < RADIUS_FLOOR:
        return True
    return min_displacement(x, metric) >= 2 * mpmath.mpf(r)


@dataclass(frozen=True)
class RadiusCertificate:
    certified: mpmath.mpf  # half the minimal displacement over the sample
    min_radius: mpmath.mpf
    configured: float
    bound: float  # min{1/(8M), eta0}
    points: int


def certify_delta(
    sample: list[LatticeClass],
    M: float,
    delta: float,
    metric: MetricConfig | None = None,
) -> RadiusCertificate:
    """Certify `delta` as an injectivity radius over a sample of X_{<17M}.

    Each point's largest radius passing `injectivity_check` is half its minimal
    displacement; the sample radius is the minimum of those, and the certificate
    is half of that again.
    """
    metric = metric or MetricConfig()
    if not sample:
        raise CertificationFailed("Cannot certify an injectivity radius on an empty sample")
    radii = [min_displacement(x, metric) / 2 for x in sample]
    min_radius = min(radii)
    cert = RadiusCertificate(
        certified=min_radius / 2,
        min_radius=min_radius,
        configured=delta,
        bound=min(1 / (8 * M), metric.eta0),
        points=len(sample),
    )
    log.info("Certified radius %s over %d points (configured %g)",
             mpmath.nstr(cert.certified, 6), len(sample), delta)
    if not delta < cert.bound:
        raise CertificationFailed(
            f"delta = {delta:g} violates δ < min{{1/8M, η₀}} = {cert.bound:g}"
        )
    if delta > cert.certified:
        log.warning("Configured delta = %g exceeds the certified radius %s on this sample",
                    delta, mpmath.nstr(cert.certified, 6))
    return cert
