"""Grid and Monte Carlo samplers of the restricted parameter cube."""

from __future__ import annotations

import itertools
import math

import mpmath

from construction.base import BaseSampler
from construction.params import ConstructionParams
from utils.pool import sample_rng


class GridSampler(BaseSampler):
    """Cell midpoints of a regular ⌈count^{1/d}⌉^d grid, lexicographic order."""

    def sample(self, p: ConstructionParams, count: int, seed: int) -> list[tuple]:
        lo, hi = self.bounds(p)
        per_axis = max(1, math.ceil(count ** (1 / p.d) - 1e-9))
        step = (hi - lo) / per_axis
        axis = [lo + (k + mpmath.mpf(1) / 2) * step for k in range(per_axis)]
        return [tuple(pt) for pt in itertools.product(axis, repeat=p.d)]


class MonteCarloSampler(BaseSampler):
    """Independent uniform points, one generator per sample index."""

    def sample(self, p: ConstructionParams, count: int, seed: int) -> list[tuple]:
        lo, hi = self.bounds(p)
        out = []
        for i in range(count):
            u = sample_rng(seed, i).random(p.d)
            out.append(tuple(lo + mpmath.mpf(float(x)) * (hi - lo) for x in u))
        return out
