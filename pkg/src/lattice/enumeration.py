"""Shortest nonzero lattice vector under the maximum norm.

Schnorr–Euchner style depth-first enumeration on the Gram–Schmidt data of a
reduced basis. A vector of sup norm s has Euclidean length at most √n·s, so
the Euclidean search radius is √n times the best sup norm found so far and
shrinks as better vectors turn up.
"""

from __future__ import annotations

import logging

import mpmath
import numpy as np

from core.errors import EnumerationOverflow
from lattice.reduction import gram_schmidt

log = logging.getLogger("cusplab.lattice.enumeration")

MAX_BOX = 10**9


def sup_norm(v) -> mpmath.mpf:
    return max(abs(x) for x in v)


def _box_size(radius2, norms) -> float:
    total = 1.0
    for b2 in norms:
        half = int(mpmath.floor(mpmath.sqrt(radius2 / b2)))
        total *= 2 * half + 1
        if total > MAX_BOX:
            break
    return total


def enumerate_shortest(r: np.ndarray) -> tuple[mpmath.mpf, list[int]]:
    """Return (λ₁, c) with c·r a shortest nonzero vector of the row lattice of r."""
    n = r.shape[0]
    rows = [list(r[i]) for i in range(n)]
    _, mu, norms = gram_schmidt(rows)
    if any(b2 == 0 for b2 in norms):
        raise EnumerationOverflow("Basis rows are linearly dependent")

    best_idx = min(range(n), key=lambda i: sup_norm(rows[i]))
    best = sup_norm(rows[best_idx])
    best_c = [1 if i == best_idx else 0 for i in range(n)]

    radius2 = n * best**2
    box = _box_size(radius2, norms)
    if box > MAX_BOX:
        raise EnumerationOverflow(
            f"Coefficient box of {box:.3g} candidates exceeds {MAX_BOX:.0e}; reduce the basis first"
        )

    c = [0] * n
    centers = [mpmath.mpf(0)] * n
    partial = [mpmath.mpf(0)] * (n + 1)
    visited = 0

    def descend(level: int) -> None:
        nonlocal best, best_c, radius2, visited
        center = -mpmath.fsum(c[j] * mu[j][level] for j in range(level + 1, n))
        centers[level] = center
        room = radius2 - partial[level + 1]
        if room < 0:
            return
        span = mpmath.sqrt(room / norms[level])
        lo = int(mpmath.ceil(center - span))
        hi = int(mpmath.floor(center + span))
        for value in range(lo, hi + 1):
            c[level] = value
            partial[level] = partial[level + 1] + (value - center) ** 2 * norms[level]
            if partial[level] > radius2:
                continue
            if level > 0:
                descend(level - 1)
                continue
            visited += 1
            if not any(c):
                continue
            v = [mpmath.fsum(c[i] * rows[i][k] for i in range(n)) for k in range(n)]
            s = sup_norm(v)
            if s < best:
                best = s
                best_c = list(c)
                radius2 = n * best**2
        c[level] = 0

    descend(n - 1)
    log.debug("Enumerated %d leaves, λ₁ = %s", visited, mpmath.nstr(best, 10))
    return best, best_c


def normalize_witness(w: list[int]) -> list[int]:
    """Flip sign so the last nonzero coordinate is positive."""
    for x in reversed(w):
        if x:
            return w if x > 0 else [-y for y in w]
    return w


def witness_in_basis(c: list[int], h: np.ndarray) -> list[int]:
    """Map coefficients relative to R = H·B into coefficients relative to B."""
    n = len(c)
    w = [sum(c[i] * int(h[i, j]) for i in range(n)) for j in range(n)]
    return normalize_witness(w)
