"""The diagonal flow T(x) = x·a with a = diag(e^{1/d}, …, e^{1/d}, e^{-1})."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import mpmath
import numpy as np

from core import GroupElement, active, diagonal
from core.errors import PrecisionExhausted
from lattice import LatticeClass, lattice_class


@dataclass(frozen=True)
class FlowParams:
    d: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError(f"d must be positive, got {self.d}")

    @cached_property
    def alpha(self) -> tuple[mpmath.mpf, ...]:
        """Log-eigenvalues of a; they sum to zero."""
        return (mpmath.mpf(1) / self.d,) * self.d + (mpmath.mpf(-1),)

    @property
    def expansion_rate(self) -> mpmath.mpf:
        """(d+1)/d: the exponent by which an unstable coordinate grows per step."""
        return mpmath.mpf(self.d + 1) / self.d


def check_guard(l: int, d: int) -> None:
    load = abs(l) * (d + 1) / d
    guard = active().exponent_guard
    if load > guard:
        raise PrecisionExhausted(
            f"Flow time {l} needs |l|(d+1)/d = {load:.1f} > guard {guard:.1f} at "
            f"{active().mantissa_bits} bits; raise precision_bits"
        )


def flow_diagonal(d: int, l: int) -> GroupElement:
    """a^l built from the exponent vector."""
    check_guard(l, d)
    return diagonal(mpmath.exp(alpha * l) for alpha in FlowParams(d).alpha)


def scale_columns(g: GroupElement, l: int) -> GroupElement:
    """g·a^l by scaling column j by e^{alpha_j·l}."""
    d = g.d
    check_guard(l, d)
    factors = [mpmath.exp(alpha * l) for alpha in FlowParams(d).alpha]
    out = np.array(g.entries, dtype=object)
    for j, f in enumerate(factors):
        out[:, j] = out[:, j] * f
    return GroupElement(out)


def apply_flow(point: LatticeClass, l: int) -> LatticeClass:
    """T^l(x) = Γ(b·a^l), re-reduced."""
    if l == 0:
        return point
    return lattice_class(scale_columns(point.reduced, l), validate=False)


def conjugate_by_flow(g: GroupElement, l: int) -> GroupElement:
    """a^{-l}·g·a^l: entry (i, j) picks up e^{(alpha_j - alpha_i)·l}."""
    d = g.d
    check_guard(l, d)
    alpha = FlowParams(d).alpha
    out = np.array(g.entries, dtype=object)
    for i in range(d + 1):
        for j in range(d + 1):
            if i != j:
                out[i, j] = out[i, j] * mpmath.exp((alpha[j] - alpha[i]) * l)
    return GroupElement(out)


def tracked_vector_norm(t, M: float, d: int, l: int) -> mpmath.mpf:
    """‖(t/M, 1/M)·a^l‖_∞ = max(‖t‖_∞·e^{l/d}, e^{-l}) / M."""
    t_sup = max(abs(mpmath.mpf(x)) for x in t) if len(t) else mpmath.mpf(0)
    return max(t_sup * mpmath.exp(mpmath.mpf(l) / d), mpmath.exp(-l)) / mpmath.mpf(M)
