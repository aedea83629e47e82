"""Working precision for every multiprecision computation.

All matrices carry mpmath ``mpf`` entries and are evaluated at the precision of
the active :class:`PrecisionConfig`. The active config is process-wide (it sets
``mpmath.mp.prec``); worker processes re-activate it in their initializer.
"""

from __future__ import annotations

import logging
import math
from contextlib import contextmanager
from dataclasses import dataclass, replace
from typing import Iterator

import mpmath

log = logging.getLogger("cusplab.core.precision")

DEFAULT_MANTISSA_BITS = 128
GUARD_AT_DEFAULT = 120  # max |l|·(d+1)/d at 128 bits
HORIZON_HEADROOM_BITS = 96


@dataclass(frozen=True)
class PrecisionConfig:
    """Floating significand width, determinant tolerance and RNG seed."""

    mantissa_bits: int = DEFAULT_MANTISSA_BITS
    det_tol: float = 1e-20  # allowed |det - 1| drift
    seed: int = 42

    def __post_init__(self) -> None:
        if self.mantissa_bits < 53:
            raise ValueError(f"mantissa_bits must be >= 53, got {self.mantissa_bits}")
        if not 0 < self.det_tol < 1:
            raise ValueError(f"det_tol must lie in (0, 1), got {self.det_tol}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    @property
    def unit_roundoff(self) -> mpmath.mpf:
        return mpmath.ldexp(mpmath.mpf(1), -self.mantissa_bits)

    @property
    def exponent_guard(self) -> float:
        """Largest admissible |l|·(d+1)/d for flow scalings at this precision."""
        return GUARD_AT_DEFAULT * self.mantissa_bits / DEFAULT_MANTISSA_BITS

    def for_horizon(self, horizon: int, d: int) -> PrecisionConfig:
        """Return a config with enough bits to follow an orbit for `horizon` steps.

        The unstable direction grows by e^{(d+1)/d} per step, so reconstructing
        the lattice at time `horizon` from its base point loses
        horizon·(d+1)/d·log2(e) bits. Keeps HORIZON_HEADROOM_BITS on top.
        """
        needed = HORIZON_HEADROOM_BITS + math.ceil(abs(horizon) * (d + 1) / d * math.log2(math.e))
        if needed <= self.mantissa_bits:
            return self
        log.debug("Raising precision from %d to %d bits for horizon %d",
                  self.mantissa_bits, needed, horizon)
        return replace(self, mantissa_bits=needed)


_active = PrecisionConfig()
mpmath.mp.prec = _active.mantissa_bits


def activate(cfg: PrecisionConfig) -> None:
    """Make `cfg` the process-wide working precision."""
    global _active
    _active = cfg
    mpmath.mp.prec = cfg.mantissa_bits


def active() -> PrecisionConfig:
    return _active


@contextmanager
def working_precision(cfg: PrecisionConfig) -> Iterator[PrecisionConfig]:
    """Temporarily activate `cfg`, restoring the previous config on exit.

    The mantissa never drops below the one already active.
    """
    previous = _active
    if cfg.mantissa_bits < previous.mantissa_bits:
        cfg = replace(cfg, mantissa_bits=previous.mantissa_bits)
    activate(cfg)
    try:
        yield cfg
    finally:
        activate(previous)


def mpf(value) -> mpmath.mpf:
    """Convert ints, floats, decimal strings or mpf to an mpf at working precision."""
    return mpmath.mpf(value)
