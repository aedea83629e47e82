"""Lattice points of X = Γ\\G and their height data."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import mpmath
import numpy as np

from core import GroupElement
from lattice.enumeration import enumerate_shortest, witness_in_basis


class Region(str, Enum):
    BELOW = "Below"
    BOUNDARY = "Boundary"
    ABOVE = "Above"


@dataclass(frozen=True)
class HeightReport:
    lambda1: mpmath.mpf  # sup norm of a shortest nonzero vector
    witness: tuple[int, ...]  # coefficients relative to the original basis
    height: mpmath.mpf


@dataclass(frozen=True, eq=False)
class LatticeClass:
    """A coset Γ·basis with its reduced row basis.

    `transform` is the integer matrix H with reduced = H·basis and det H = 1.
    Build instances through `lattice.lattice_class`.
    """

    basis: GroupElement
    reduced: GroupElement
    transform: np.ndarray

    @property
    def d(self) -> int:
        return self.basis.d

    @cached_property
    def height_report(self) -> HeightReport:
        lambda1, c = enumerate_shortest(self.reduced.entries)
        witness = witness_in_basis(c, self.transform)
        return HeightReport(lambda1=lambda1, witness=tuple(witness), height=1 / lambda1)
