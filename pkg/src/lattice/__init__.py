"""Points of X = SL(d+1,Z)\\SL(d+1,R): reduction, sup-norm shortest vectors, height.

Usage:
    from lattice import lattice_class, height, region_classify, Region

    x = lattice_class(g)
    if region_classify(x, M=2) is Region.ABOVE:
        ...
"""

from __future__ import annotations

import logging

import mpmath

from core import GroupElement, active, det_check
from core.errors import ReductionStall, SingularDrift
from lattice.integer import int_identity, integer_det, random_unimodular
from lattice.models import HeightReport, LatticeClass, Region
from lattice.reduction import reduce_basis, reduce_rows

log = logging.getLogger("cusplab.lattice")

DEFAULT_TOL = 1e-9


def lattice_class(b: GroupElement, validate: bool = True) -> LatticeClass:
    """Reduce `b` and wrap it as a point of X.

    With `validate` (the default) the covolume and the reduction transform are
    checked; flow iterates and search loops pass validate=False.
    """
    r, h = reduce_rows(b.entries)
    point = LatticeClass(basis=b, reduced=GroupElement(r), transform=h)
    if validate:
        check_unimodular(point)
    return point


def check_unimodular(point: LatticeClass, tol: float = 1e-12) -> None:
    """Check det(basis) = 1 and reduced = H·basis for an integer H of determinant ±1.

    Raises:
        SingularDrift: if the basis does not span a covolume-one lattice.
        ReductionStall: if the stored transform does not reproduce the reduced basis.
    """
    drift = det_check(point.basis)
    if drift > active().det_tol:
        raise SingularDrift(
            f"Basis determinant is off by {mpmath.nstr(drift, 5)}; not a unimodular lattice"
        )
    h = point.transform
    b = point.basis.entries
    n = b.shape[0]
    scale = max(1, max(abs(x) for x in h.flat)) * max(abs(x) for x in b.flat)
    worst = max(
        abs(mpmath.fsum(int(h[i, k]) * b[k, j] for k in range(n)) - point.reduced[i, j])
        for i in range(n)
        for j in range(n)
    )
    if worst > tol * scale or abs(integer_det(h.tolist())) != 1:
        raise ReductionStall(
            f"Reduced basis is not a unimodular change of basis (relative defect "
            f"{mpmath.nstr(worst / scale, 5)})"
        )


def shortest_vector(point: LatticeClass) -> HeightReport:
    return point.height_report


def height(point: LatticeClass) -> mpmath.mpf:
    return point.height_report.height


def region_classify(point: LatticeClass, M: float, tol: float = DEFAULT_TOL) -> Region:
    """Below / Boundary / Above relative to the threshold M with a relative band tol."""
    ht = height(point)
    if ht < M * (1 - mpmath.mpf(tol)):
        return Region.BELOW
    if ht > M * (1 + mpmath.mpf(tol)):
        return Region.ABOVE
    return Region.BOUNDARY


__all__ = [
    "DEFAULT_TOL",
    "HeightReport",
    "LatticeClass",
    "Region",
    "check_unimodular",
    "height",
    "int_identity",
    "integer_det",
    "lattice_class",
    "random_unimodular",
    "reduce_basis",
    "region_classify",
    "shortest_vector",
]
