"""The seed family g_t, the set A_N and its Diophantine witness."""

from __future__ import annotations

from typing import Sequence

import mpmath
import numpy as np

from construction.params import ConstructionParams
from core import GroupElement
from flow import apply_flow
from lattice import LatticeClass, Region, lattice_class, region_classify


def make_gt(t: Sequence, M: float, d: int) -> GroupElement:
    """diag(M^{1/d}, …, M^{1/d}, 1/M) with last row (t₁/M, …, t_d/M, 1/M)."""
    if len(t) != d:
        raise ValueError(f"t must have {d} coordinates, got {len(t)}")
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    M = mpmath.mpf(M)
    scale = mpmath.root(M, d)
    arr = np.array([[mpmath.mpf(0)] * (d + 1) for _ in range(d + 1)], dtype=object)
    for i in range(d):
        arr[i, i] = scale
        arr[d, i] = mpmath.mpf(t[i]) / M
    arr[d, d] = 1 / M
    return GroupElement(arr)


def seed_lattice(t: Sequence, p: ConstructionParams) -> LatticeClass:
    """x_t = Γg_t."""
    return lattice_class(make_gt(t, p.M, p.d))


def endpoint_region(t: Sequence, p: ConstructionParams) -> Region:
    """Region of T^N(x_t) relative to 16M."""
    return region_classify(apply_flow(seed_lattice(t, p), p.N), 16 * p.M, p.tol)


def in_AN(t: Sequence, p: ConstructionParams) -> bool:
    """t ∈ A_N: T^N(x_t) lies strictly below height 16M (Boundary counts as outside)."""
    return endpoint_region(t, p) is Region.BELOW


def bad_witness(t: Sequence, p: ConstructionParams) -> tuple[tuple[int, ...], int] | None:
    """First (p, q) with q < e^N/16 and |p_i + q·t_i/M^{(d+1)/d}| < ε for every i.

    A witness yields the lattice vector (p, q)·g_t·a^N of sup norm below 1/(16M),
    so one exists exactly when ht(T^N x_t) > 16M. The first hit in increasing q
    is primitive.
    """
    eps = p.eps_bad
    scale = mpmath.mpf(p.M) ** (mpmath.mpf(p.d + 1) / p.d)
    q_max = int(mpmath.floor(mpmath.exp(p.N) / 16))
    ratios = [mpmath.mpf(x) / scale for x in t]
    for q in range(1, q_max + 1):
        # q must stay strictly below e^N/16
        if q >= mpmath.exp(p.N) / 16:
            break
        coeffs = [-int(mpmath.nint(q * r)) for r in ratios]
        if all(abs(c + q * r) < eps for c, r in zip(coeffs, ratios)):
            return tuple(coeffs), q
    return None
