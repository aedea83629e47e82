"""Abstract base class for parameter-cube samplers."""

from abc import ABC, abstractmethod

import mpmath

from construction.params import ConstructionParams


class BaseSampler(ABC):
    """Common interface for grid and Monte Carlo samplers of [e^{-N/d}/16, e^{-N/d}]^d."""

    def __init__(self, config: dict | None = None) -> None:
        self.config = config or {}

    @staticmethod
    def bounds(p: ConstructionParams) -> tuple[mpmath.mpf, mpmath.mpf]:
        return p.side / 16, p.side

    @abstractmethod
    def sample(self, p: ConstructionParams, count: int, seed: int) -> list[tuple]:
        """Return about `count` points t of the restricted cube.

        Args:
            p: Construction constants (d, N fix the cube).
            count: Requested number of points.
            seed: Base seed; point i uses its own generator derived from (seed, i).

        Returns:
            List of d-tuples of mpf, deterministic given the arguments.
        """
        ...
