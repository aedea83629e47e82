"""Constants consumed by the seed construction and the recursive build."""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath

from core import PrecisionConfig
from core.errors import ConfigInvalid
from geometry import MetricConfig
from geometry.metric import DEFAULT_C0, DEFAULT_ETA0, DEFAULT_GAMMA_BOX

DEFAULT_NPRIME = 10


def max_symbols(d: int, N: int) -> int:
    """⌊e^{dN}/13⌋."""
    return int(mpmath.floor(mpmath.exp(d * N) / 13))


def default_delta(M: float, eta0: float) -> float:
    return 0.9 * min(1 / (8 * M), eta0)


@dataclass(frozen=True)
class ConstructionParams:
    """Every constant the construction consumes.

    K, delta and eta default to ⌊e^{dN}/13⌋, 0.9·min{1/(8M), η₀} and δ/2.
    Constructing an instance validates the construction's inequalities and
    raises ConfigInvalid naming the one that fails.
    """

    d: int = 2
    M: float = 2.0
    N: int = 4
    K: int | None = None
    delta: float | None = None
    eta: float | None = None
    c0: float = DEFAULT_C0
    eta0: float = DEFAULT_ETA0
    gamma_box: int = DEFAULT_GAMMA_BOX
    Nprime: int = DEFAULT_NPRIME
    tol: float = 1e-9
    allow_d1: bool = False
    precision: PrecisionConfig = field(default_factory=PrecisionConfig)

    def __post_init__(self) -> None:
        if self.d < 1 or (self.d == 1 and not self.allow_d1):
            raise ConfigInvalid(f"d must be >= 2 (d = 1 needs allow_d1), got {self.d}")
        if self.M < 1:
            raise ConfigInvalid(f"M must be >= 1, got {self.M}")
        if self.N < 1:
            raise ConfigInvalid(f"N must be a positive integer, got {self.N}")
        if self.Nprime < 0:
            raise ConfigInvalid(f"N' must be non-negative, got {self.Nprime}")
        if self.tol < 0:
            raise ConfigInvalid(f"tol must be non-negative, got {self.tol}")

        cap = max_symbols(self.d, self.N)
        if self.K is None:
            object.__setattr__(self, "K", cap)
        if self.delta is None:
            object.__setattr__(self, "delta", default_delta(self.M, self.eta0))
        if self.eta is None:
            object.__setattr__(self, "eta", self.delta / 2)

        if self.K < 1:
            raise ConfigInvalid(f"K must be positive, got {self.K}")
        if self.K > cap:
            raise ConfigInvalid(f"K = {self.K} exceeds ⌊e^{{dN}}/13⌋ = {cap}")
        bound = min(1 / (8 * self.M), self.eta0)
        if not 0 < self.delta < bound:
            raise ConfigInvalid(
                f"delta = {self.delta:g} violates δ<min{{1/8M, η₀}} = {bound:g}"
            )
        if not 0 < self.eta < self.delta:
            raise ConfigInvalid(f"eta = {self.eta:g} violates 0 < η < δ = {self.delta:g}")
        self.metric  # validates c0, eta0 and gamma_box

    @property
    def K_max(self) -> int:
        return max_symbols(self.d, self.N)

    @property
    def metric(self) -> MetricConfig:
        return MetricConfig(c0=self.c0, eta0=self.eta0, gamma_box=self.gamma_box)

    @property
    def side(self) -> mpmath.mpf:
        """e^{-N/d}: side of the parameter cube."""
        return mpmath.exp(-mpmath.mpf(self.N) / self.d)

    @property
    def cell(self) -> mpmath.mpf:
        """e^{-N(d+1)/d}: the cube-partition scale."""
        return mpmath.exp(-mpmath.mpf(self.N) * (self.d + 1) / self.d)

    @property
    def eps_bad(self) -> mpmath.mpf:
        """e^{-N/d} / (16·M^{(d+1)/d}), the Diophantine tolerance."""
        return self.side / (16 * mpmath.mpf(self.M) ** (mpmath.mpf(self.d + 1) / self.d))

    @property
    def horizon_unit(self) -> int:
        """N + N′, the length of one block plus its connector."""
        return self.N + self.Nprime

    def horizon(self, m: int) -> int:
        """mN + (m−1)N′."""
        return m * self.N + (m - 1) * self.Nprime

    @property
    def connector_tol(self) -> float:
        """δ/(c₀³·3⁹)."""
        return self.delta / (self.c0**3 * 3**9)

    @property
    def separation(self) -> float:
        """s = η/e²."""
        return self.eta / float(mpmath.e) ** 2
