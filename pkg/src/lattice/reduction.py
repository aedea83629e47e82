"""Euclidean basis reduction over mpf rows.

LLL followed by greedy pairwise reduction. Both stages update an integer
transform H alongside the rows so that R = H·B holds throughout, and both
draw on one shared pass budget.
"""

from __future__ import annotations

import logging

import mpmath
import numpy as np

from core import GroupElement
from core.errors import ReductionStall
from lattice.integer import int_identity, integer_det

log = logging.getLogger("cusplab.lattice.reduction")

MAX_PASSES = 10_000
LLL_DELTA = mpmath.mpf(99) / 100


def _dot(u, v):
    return mpmath.fsum(a * b for a, b in zip(u, v))


def gram_schmidt(rows: list[list]) -> tuple[list[list], list[list], list]:
    """Return (b*, mu, |b*|²) with b_i = b*_i + Σ_{j<i} mu[i][j]·b*_j."""
    n = len(rows)
    bstar: list[list] = []
    norms: list = []
    mu = [[mpmath.mpf(0)] * n for _ in range(n)]
    for i in range(n):
        v = list(rows[i])
        for j in range(i):
            if norms[j] == 0:
                continue
            mu[i][j] = _dot(rows[i], bstar[j]) / norms[j]
            v = [a - mu[i][j] * b for a, b in zip(v, bstar[j])]
        bstar.append(v)
        norms.append(_dot(v, v))
    return bstar, mu, norms


class _Budget:
    def __init__(self, limit: int) -> None:
        self.limit = limit
        self.used = 0

    def tick(self, stage: str) -> None:
        self.used += 1
        if self.used > self.limit:
            raise ReductionStall(f"{stage} did not terminate within {self.limit} passes")


def _lll(rows: list[list], h: list[list], budget: _Budget) -> None:
    n = len(rows)
    k = 1
    while k < n:
        budget.tick("LLL")
        for j in range(k - 1, -1, -1):
            _, mu, _ = gram_schmidt(rows)
            q = int(mpmath.nint(mu[k][j]))
            if q:
                rows[k] = [a - q * b for a, b in zip(rows[k], rows[j])]
                h[k] = [a - q * b for a, b in zip(h[k], h[j])]
        _, mu, norms = gram_schmidt(rows)
        if norms[k] >= (LLL_DELTA - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            rows[k], rows[k - 1] = rows[k - 1], rows[k]
            h[k], h[k - 1] = h[k - 1], h[k]
            k = max(k - 1, 1)


def _pairwise(rows: list[list], h: list[list], budget: _Budget) -> None:
    n = len(rows)
    changed = True
    while changed:
        budget.tick("Pairwise reduction")
        changed = False
        for k in range(n):
            for j in range(n):
                if j == k:
                    continue
                nj = _dot(rows[j], rows[j])
                q = int(mpmath.nint(_dot(rows[k], rows[j]) / nj))
                if not q:
                    continue
                candidate = [a - q * b for a, b in zip(rows[k], rows[j])]
                if _dot(candidate, candidate) < _dot(rows[k], rows[k]):
                    rows[k] = candidate
                    h[k] = [a - q * b for a, b in zip(h[k], h[j])]
                    changed = True
        order = sorted(range(n), key=lambda i: _dot(rows[i], rows[i]))
        rows[:] = [rows[i] for i in order]
        h[:] = [h[i] for i in order]


def reduce_rows(b: np.ndarray, max_passes: int = MAX_PASSES) -> tuple[np.ndarray, np.ndarray]:
    """Reduce the rows of `b`, returning (R, H) with R = H·b and det H = 1.

    R is LLL-reduced, then pairwise reduced (no row can be shortened by an
    integer multiple of another) and sorted by Euclidean length.
    """
    n = b.shape[0]
    rows = [list(b[i]) for i in range(n)]
    h = [list(r) for r in int_identity(n)]
    budget = _Budget(max_passes)

    _lll(rows, h, budget)
    _pairwise(rows, h, budget)

    if integer_det(h) < 0:
        rows[-1] = [-a for a in rows[-1]]
        h[-1] = [-a for a in h[-1]]
    log.debug("Reduced %d-row basis in %d passes", n, budget.used)

    r_arr = np.empty((n, n), dtype=object)
    h_arr = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            r_arr[i, j] = rows[i][j]
            h_arr[i, j] = int(h[i][j])
    return r_arr, h_arr


def reduce_basis(b: GroupElement) -> GroupElement:
    """Reduced row basis of the same coset Γb."""
    r, _ = reduce_rows(b.entries)
    return GroupElement(r)
