"""Height profiles along finite orbit segments."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import mpmath

from flow.transform import apply_flow, check_guard
from lattice import DEFAULT_TOL, LatticeClass, Region, height, region_classify

log = logging.getLogger("cusplab.flow.orbit")


@dataclass(frozen=True)
class OrbitStep:
    l: int
    height: mpmath.mpf
    region: Region


@dataclass
class OrbitRecord:
    base: LatticeClass
    steps: list[OrbitStep] = field(default_factory=list)

    def heights(self) -> list[mpmath.mpf]:
        return [s.height for s in self.steps]

    def count_at_least(self, threshold) -> int:
        """Number of recorded times with height ≥ threshold."""
        return sum(1 for s in self.steps if s.height >= threshold)

    def at(self, l: int) -> OrbitStep:
        for s in self.steps:
            if s.l == l:
                return s
        raise KeyError(l)

    def max_height(self) -> mpmath.mpf:
        return max(self.heights())


def orbit_heights(
    point: LatticeClass,
    l_min: int,
    l_max: int,
    M: float,
    tol: float = DEFAULT_TOL,
) -> OrbitRecord:
    """Heights and region flags of T^l(point) for l in [l_min, l_max]."""
    if l_min > l_max:
        raise ValueError(f"Empty orbit range [{l_min}, {l_max}]")
    check_guard(l_min, point.d)
    check_guard(l_max, point.d)

    record = OrbitRecord(base=point)
    current = apply_flow(point, l_min)
    for l in range(l_min, l_max + 1):
        if l > l_min:
            current = apply_flow(current, 1)
        record.steps.append(
            OrbitStep(l=l, height=height(current), region=region_classify(current, M, tol))
        )
    log.debug("Orbit [%d, %d]: max height %s", l_min, l_max, mpmath.nstr(record.max_height(), 8))
    return record
