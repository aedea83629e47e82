"""Dense SL(d+1, R) matrices over mpf.

Matrices are small (d+1 <= 6) so everything is stored dense as a read-only
numpy object array of mpf. Products use numpy's object matmul; determinants
and inverses go through mpmath at the active precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import mpmath
import numpy as np

from core.errors import SingularDrift
from core.precision import active

MAX_SIZE = 6

_to_mpf = np.vectorize(mpmath.mpf, otypes=[object])


@dataclass(frozen=True, eq=False)
class GroupElement:
    """A (d+1)×(d+1) real matrix, nominally of determinant 1.

    The determinant invariant is not re-checked on construction (products of
    flow-scaled matrices are legitimately ill-conditioned); operations that
    rely on it (`mat_inverse`, lattice construction) check it.
    """

    entries: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.entries, dtype=object)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"GroupElement needs a square matrix, got shape {arr.shape}")
        if not 2 <= arr.shape[0] <= MAX_SIZE:
            raise ValueError(f"Matrix size {arr.shape[0]} outside supported range 2..{MAX_SIZE}")
        arr = _to_mpf(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    @property
    def d(self) -> int:
        return self.size - 1

    def __matmul__(self, other: GroupElement) -> GroupElement:
        return GroupElement(self.entries @ other.entries)

    def __getitem__(self, idx):
        return self.entries[idx]

    def to_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.entries], dtype=float)

    def to_mp(self) -> mpmath.matrix:
        return mpmath.matrix(self.entries.tolist())

    def to_strings(self, bits: int | None = None) -> list[list[str]]:
        """Decimal strings that reload bit-exactly at `bits` of precision."""
        bits = bits or active().mantissa_bits
        digits = math.ceil(bits * math.log10(2)) + 2
        return [[mpmath.nstr(x, digits, strip_zeros=False) for x in row] for row in self.entries]

    @classmethod
    def from_strings(cls, rows: Sequence[Sequence[str]]) -> GroupElement:
        return cls(np.array([[mpmath.mpf(s) for s in row] for row in rows], dtype=object))


def identity(size: int) -> GroupElement:
    return GroupElement(np.array(mpmath.eye(size).tolist(), dtype=object))


def diagonal(values: Iterable) -> GroupElement:
    values = [mpmath.mpf(v) for v in values]
    n = len(values)
    arr = np.array([[mpmath.mpf(0)] * n for _ in range(n)], dtype=object)
    for i, v in enumerate(values):
        arr[i, i] = v
    return GroupElement(arr)


def elementary(size: int, i: int, j: int, value) -> GroupElement:
    """I + value·E_ij with 0-based indices (i != j keeps det = 1)."""
    arr = np.array(mpmath.eye(size).tolist(), dtype=object)
    arr[i, j] = arr[i, j] + mpmath.mpf(value)
    return GroupElement(arr)


def determinant(g: GroupElement) -> mpmath.mpf:
    return mpmath.det(g.to_mp())


def det_check(g: GroupElement) -> mpmath.mpf:
    """|det(g) − 1|."""
    return abs(determinant(g) - 1)


def sup_dev(g: GroupElement) -> mpmath.mpf:
    """‖g − 1‖ in the maximum norm over entries."""
    worst = mpmath.mpf(0)
    for i in range(g.size):
        for j in range(g.size):
            dev = abs(g.entries[i, j] - (1 if i == j else 0))
            if dev > worst:
                worst = dev
    return worst


def mat_inverse(g: GroupElement) -> GroupElement:
    drift = det_check(g)
    if drift > active().det_tol:
        raise SingularDrift(f"|det - 1| = {mpmath.nstr(drift, 5)} exceeds det_tol "
                            f"{active().det_tol:g}")
    inv = mpmath.inverse(g.to_mp())
    return GroupElement(np.array(inv.tolist(), dtype=object))


def renormalize(g: GroupElement) -> GroupElement:
    """Rescale by det^{-1/(d+1)} so the determinant returns to 1."""
    det = determinant(g)
    if det <= 0:
        raise SingularDrift(f"Cannot renormalize a matrix with determinant {mpmath.nstr(det, 5)}")
    scale = mpmath.root(det, g.size) ** -1
    return GroupElement(g.entries * scale)


def multiply(*gs: GroupElement) -> GroupElement:
    """Left-to-right product, renormalized once the drift passes det_tol/2."""
    if not gs:
        raise ValueError("multiply needs at least one factor")
    out = gs[0].entries
    for g in gs[1:]:
        out = out @ g.entries
    product = GroupElement(out)
    if det_check(product) > active().det_tol / 2:
        product = renormalize(product)
    return product
