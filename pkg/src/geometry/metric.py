"""Left-invariant surrogate for the Riemannian metric on G."""

from __future__ import annotations

from dataclasses import dataclass

import mpmath

from core import GroupElement, mat_inverse, sup_dev
from core.errors import ConfigInvalid

DEFAULT_C0 = 1.5
DEFAULT_ETA0 = 0.5
DEFAULT_GAMMA_BOX = 1


@dataclass(frozen=True)
class MetricConfig:
    c0: float = DEFAULT_C0  # norm-comparison constant
    eta0: float = DEFAULT_ETA0  # validity radius of the comparison
    gamma_box: int = DEFAULT_GAMMA_BOX  # entry offsets tried around a rounded γ

    def __post_init__(self) -> None:
        if self.c0 < 1:
            raise ConfigInvalid(f"c0 must be >= 1, got {self.c0}")
        if not 0 < self.eta0 < 1:
            raise ConfigInvalid(f"eta0 must lie in (0, 1), got {self.eta0}")
        if self.gamma_box < 1:
            raise ConfigInvalid(f"gamma_box must be >= 1, got {self.gamma_box}")

    @property
    def slack(self) -> float:
        """Multiplicative slack c0² applied when a bound crosses the metric comparison."""
        return self.c0**2


def group_dist(g: GroupElement, h: GroupElement) -> mpmath.mpf:
    """D(g, h) = max(‖g⁻¹h − 1‖, ‖h⁻¹g − 1‖) in the maximum norm."""
    return max(sup_dev(mat_inverse(g) @ h), sup_dev(mat_inverse(h) @ g))


def group_dist_pre(
    g: GroupElement, g_inv: GroupElement, h: GroupElement, h_inv: GroupElement
) -> mpmath.mpf:
    """group_dist with both inverses supplied, for pair sweeps."""
    return max(sup_dev(g_inv @ h), sup_dev(h_inv @ g))
