"""Unstable / centralizer / stable splitting of a near-identity element.

For g close to the identity, right multiplication by u⁺ (last-row unipotent)
clears the last row of g off the diagonal:

    g·u⁺ = g′ = c·u⁻

with c block-diagonal (commutes with a) and u⁻ last-column unipotent.
"""

from __future__ import annotations

from typing import Sequence

import mpmath
import numpy as np

from core import GroupElement, identity, mat_inverse, sup_dev
from core.errors import DisplacementTooLarge

MAX_DISPLACEMENT = mpmath.mpf(1) / 2


def unstable_element(u: Sequence, d: int) -> GroupElement:
    """u⁺(u): identity with last row (u₁, …, u_d, 1)."""
    arr = np.array(identity(d + 1).entries, dtype=object)
    for i, value in enumerate(u):
        arr[d, i] = mpmath.mpf(value)
    return GroupElement(arr)


def stable_element(w: Sequence, d: int) -> GroupElement:
    """u⁻(w): identity with last column (w₁, …, w_d, 1)."""
    arr = np.array(identity(d + 1).entries, dtype=object)
    for i, value in enumerate(w):
        arr[i, d] = mpmath.mpf(value)
    return GroupElement(arr)


def unstable_coordinates(g: GroupElement) -> tuple:
    """u_i = −g_{(d+1)i} / g_{(d+1)(d+1)}."""
    d = g.d
    return tuple(-g[d, i] / g[d, d] for i in range(d))


def shadow_decompose(g: GroupElement) -> tuple[tuple, GroupElement, GroupElement]:
    """Return (u_plus, c, u_minus) with g·u⁺(u_plus) = c·u_minus."""
    dev = sup_dev(g)
    if dev >= MAX_DISPLACEMENT:
        raise DisplacementTooLarge(
            f"sup_dev(g) = {mpmath.nstr(dev, 6)} is not below {MAX_DISPLACEMENT}"
        )
    d = g.d
    u = unstable_coordinates(g)
    g_prime = g @ unstable_element(u, d)

    block = np.array(identity(d + 1).entries, dtype=object)
    block[:d, :d] = g_prime.entries[:d, :d]
    block[d, d] = g_prime[d, d]
    c = GroupElement(block)
    u_minus = mat_inverse(c) @ g_prime
    return u, c, u_minus


def reconstruction_error(g: GroupElement, u_plus: Sequence, c: GroupElement,
                         u_minus: GroupElement) -> mpmath.mpf:
    """max |g·u⁺ − c·u⁻| over entries."""
    lhs = (g @ unstable_element(u_plus, g.d)).entries
    rhs = (c @ u_minus).entries
    return max(abs(a - b) for a, b in zip(lhs.flat, rhs.flat))


def split_left(h: GroupElement) -> tuple[tuple, GroupElement, GroupElement]:
    """Return (a, c, u_minus) with h = u⁺(a)·c·u⁻, unstable factor on the left.

    Needs the upper d×d block of h to be invertible.
    """
    d = h.d
    block = mpmath.matrix(h.entries[:d, :d].tolist())
    try:
        block_inv = mpmath.inverse(block)
    except ZeroDivisionError as exc:
        raise DisplacementTooLarge("Upper block of the mismatch is singular") from exc
    last = mpmath.matrix([list(h.entries[d, :d])])
    v = -(last * block_inv)
    a = tuple(-v[0, i] for i in range(d))
    rest = unstable_element([v[0, i] for i in range(d)], d) @ h

    diag = np.array(identity(d + 1).entries, dtype=object)
    diag[:d, :d] = rest.entries[:d, :d]
    diag[d, d] = rest[d, d]
    c = GroupElement(diag)
    return a, c, mat_inverse(c) @ rest
