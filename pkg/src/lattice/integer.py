"""Exact integer-matrix helpers: determinants and random unimodular matrices."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np


def integer_det(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant by Fraction-based Gaussian elimination."""
    m = [[Fraction(int(x)) for x in row] for row in rows]
    n = len(m)
    det = Fraction(1)
    for i in range(n):
        p = i
        while p < n and m[p][i] == 0:
            p += 1
        if p == n:
            return 0
        if p != i:
            m[i], m[p] = m[p], m[i]
            det = -det
        piv = m[i][i]
        det *= piv
        for r in range(i + 1, n):
            if m[r][i] == 0:
                continue
            f = m[r][i] / piv
            for c in range(i, n):
                m[r][c] -= f * m[i][c]
    return int(det)


def int_identity(size: int) -> np.ndarray:
    """Identity as an object array of Python ints (no overflow)."""
    arr = np.zeros((size, size), dtype=object)
    for i in range(size):
        for j in range(size):
            arr[i, j] = 1 if i == j else 0
    return arr


def random_unimodular(
    rng: np.random.Generator,
    size: int,
    entry_bound: int = 5,
    steps: int = 40,
) -> np.ndarray:
    """Random determinant-one integer matrix with entries in [-entry_bound, entry_bound].

    Built from random elementary shears row_i += ±row_j; a shear that would
    push an entry past the bound is skipped.
    """
    u = int_identity(size)
    for _ in range(steps):
        i, j = rng.choice(size, size=2, replace=False)
        sign = 1 if rng.random() < 0.5 else -1
        candidate = u[i] + sign * u[j]
        if max(abs(int(x)) for x in candidate) <= entry_bound:
            u[i] = candidate
    return u
