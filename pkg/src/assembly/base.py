"""Abstract base class for connector searches."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import mpmath

from construction import ConstructionParams
from core import GroupElement
from lattice import LatticeClass


@dataclass(frozen=True)
class ConnectorResult:
    """A point z near y whose N′-th image is near x."""

    z: LatticeClass
    dist_start: mpmath.mpf  # d(z, y)
    dist_end: mpmath.mpf  # d(x, T^{N′} z)
    iterations: int
    nprime: int
    tol: float
    start_rep: GroupElement  # y_rep·u⁺(s)·c, the representative z is built from
    info: dict = field(default_factory=dict)

    @property
    def success(self) -> bool:
        return self.dist_start < self.tol and self.dist_end < self.tol


class BaseConnector(ABC):
    """Common interface for connector searches between two points of X."""

    def __init__(self, config: dict | None = None) -> None:
        self.config = config or {}

    @abstractmethod
    def find(
        self,
        x: LatticeClass,
        y: LatticeClass,
        p: ConstructionParams,
        tol: float | None = None,
        nprime: int | None = None,
    ) -> ConnectorResult:
        """Find z with d(z, y) < tol and d(x, T^{N′} z) < tol.

        Args:
            x: Target point the connector must arrive near.
            y: Point the connector starts near.
            p: Construction constants; N′ and δ/(c₀³3⁹) come from here by default.
            tol: Override for both distance tolerances.
            nprime: Override for the connector length.

        Returns:
            A successful ConnectorResult.

        Raises:
            ConnectorNotFound: if the search budget is exhausted.
        """
        ...
