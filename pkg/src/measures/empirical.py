"""Empirical measures on finite point sets and their orbit averages."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import mpmath

from flow import apply_flow, check_guard
from lattice import DEFAULT_TOL, LatticeClass, Region, region_classify

log = logging.getLogger("cusplab.measures")

WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class Atom:
    point: LatticeClass
    weight: float
    source: int = 0  # index of the generating point
    time: int = 0  # orbit time of the atom


@dataclass
class EmpiricalMeasure:
    """A finitely supported probability measure on X."""

    atoms: list[Atom] = field(default_factory=list)
    span: int = 1  # averaging window in time steps

    def __post_init__(self) -> None:
        if not self.atoms:
            raise ValueError("An empirical measure needs at least one atom")
        if any(a.weight <= 0 for a in self.atoms):
            raise ValueError("Atom weights must be positive")
        total = self.total()
        if abs(total - 1) > WEIGHT_TOL:
            raise ValueError(f"Atom weights sum to {total!r}, not 1")

    def __len__(self) -> int:
        return len(self.atoms)

    def total(self) -> float:
        return float(mpmath.fsum(a.weight for a in self.atoms))

    def weight_where(self, predicate) -> float:
        """Total weight of the atoms whose point satisfies predicate."""
        return float(mpmath.fsum(a.weight for a in self.atoms if predicate(a.point)))


def _lattices(points) -> list[LatticeClass]:
    return [pt.lattice if hasattr(pt, "word") else pt for pt in points]


def empirical_sigma(points) -> EmpiricalMeasure:
    """Uniform measure on the given points (coded points or lattices)."""
    lattices = _lattices(points)
    if not lattices:
        raise ValueError("empirical_sigma needs at least one point")
    w = 1.0 / len(lattices)
    return EmpiricalMeasure(
        atoms=[Atom(point=x, weight=w, source=i) for i, x in enumerate(lattices)], span=1
    )


def empirical_mu(points, horizon: int) -> EmpiricalMeasure:
    """Average of σ∘T^{-i} over 0 ≤ i < horizon: atoms along each orbit segment."""
    lattices = _lattices(points)
    if not lattices:
        raise ValueError("empirical_mu needs at least one point")
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    check_guard(horizon - 1, lattices[0].d)
    w = 1.0 / (len(lattices) * horizon)
    atoms: list[Atom] = []
    for i, x in enumerate(lattices):
        current = x
        for t in range(horizon):
            if t:
                current = apply_flow(current, 1)
            atoms.append(Atom(point=current, weight=w, source=i, time=t))
    log.debug("μ over %d points and %d steps: %d atoms", len(lattices), horizon, len(atoms))
    return EmpiricalMeasure(atoms=atoms, span=horizon)


def mass_fraction(mu: EmpiricalMeasure, M_thr: float, tol: float = DEFAULT_TOL) -> float:
    """Weight of the atoms strictly below the height threshold M_thr."""
    return mu.weight_where(lambda x: region_classify(x, M_thr, tol) is Region.BELOW)


def mass_bound(m: int, N: int, nprime: int) -> float:
    """(m−1)N′/(mN+(m−1)N′): the most time a coded orbit may spend low."""
    horizon = m * N + (m - 1) * nprime
    return (m - 1) * nprime / horizon
