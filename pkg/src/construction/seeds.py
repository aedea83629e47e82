"""Selection and verification of the seed set S_N′(1).

The restricted cube [e^{-N/d}/16, e^{-N/d}]^d is partitioned into ⌊e^N⌋^d
cubes of side (15/16)·e^{-N(d+1)/d}. One t is taken from each cube, searched
on a grid over the cube's central core of side (11/16)·e^{-N(d+1)/d}, so
points from distinct cubes are at least ¼·e^{-N(d+1)/d} apart.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import mpmath

from construction.family import in_AN, seed_lattice
from construction.params import ConstructionParams
from core import GroupElement, Report, mat_inverse
from core.errors import InsufficientCubes
from flow import orbit_heights, scale_columns, tracked_vector_norm
from geometry import group_dist_pre
from lattice import LatticeClass, Region
from utils.pool import WorkerPool, sample_pairs

log = logging.getLogger("cusplab.construction.seeds")

CORE_LO = mpmath.mpf(2) / 16
CORE_SIDE = mpmath.mpf(11) / 16
CUBE_SIDE = mpmath.mpf(15) / 16
DEFAULT_RESOLUTION = 8


@dataclass(frozen=True)
class SeedPoint:
    index: int  # symbol in 1..K
    t: tuple
    cube: tuple[int, ...]
    lattice: LatticeClass

    @property
    def g(self) -> GroupElement:
        return self.lattice.basis


@dataclass
class SeedSet:
    params: ConstructionParams
    points: list[SeedPoint] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.points)

    def symbol(self, j: int) -> SeedPoint:
        """Seed x_j for a 1-based symbol j."""
        return self.points[j - 1]

    def subset(self, k: int) -> SeedSet:
        """The first k seeds, as used by builds over K_sub symbols."""
        return SeedSet(params=self.params, points=self.points[:k])


def cube_origin(p: ConstructionParams, cube: tuple[int, ...]) -> list[mpmath.mpf]:
    lo = p.side / 16
    return [lo + c * CUBE_SIDE * p.cell for c in cube]


def core_grid(p: ConstructionParams, cube: tuple[int, ...], resolution: int) -> list[tuple]:
    """Grid midpoints over the cube's central core, lexicographic order."""
    origin = cube_origin(p, cube)
    step = CORE_SIDE * p.cell / resolution
    axes = [
        [o + CORE_LO * p.cell + (k + mpmath.mpf(1) / 2) * step for k in range(resolution)]
        for o in origin
    ]
    return [tuple(pt) for pt in itertools.product(*axes)]


def search_cube(
    p: ConstructionParams, cube: tuple[int, ...], resolution: int = DEFAULT_RESOLUTION
) -> tuple | None:
    """First core grid point of `cube` in A_N, refining the grid once on failure."""
    for res in (resolution, 2 * resolution):
        for t in core_grid(p, cube, res):
            if in_AN(t, p):
                return t
    return None


def select_S1(
    p: ConstructionParams,
    K_target: int | None = None,
    resolution: int = DEFAULT_RESOLUTION,
) -> SeedSet:
    """Pick one A_N′ point per cube in lexicographic cube order until K_target seeds."""
    K_target = p.K if K_target is None else K_target
    if not 1 <= K_target <= p.K_max:
        raise InsufficientCubes(f"K_target = {K_target} outside 1..{p.K_max}")
    per_axis = int(mpmath.floor(mpmath.exp(p.N)))
    seeds = SeedSet(params=p)
    empty = 0
    for cube in itertools.product(range(per_axis), repeat=p.d):
        t = search_cube(p, cube, resolution)
        if t is None:
            empty += 1
            continue
        seeds.points.append(
            SeedPoint(index=len(seeds) + 1, t=t, cube=cube, lattice=seed_lattice(t, p))
        )
        if len(seeds) == K_target:
            log.info("Selected %d seeds (%d cubes missed A_N)", K_target, empty)
            return seeds
    raise InsufficientCubes(
        f"Only {len(seeds)} of {per_axis**p.d} cubes met A_N at resolution {resolution}; "
        f"{K_target} requested"
    )


class _PointCheck:
    def __init__(self, p: ConstructionParams) -> None:
        self.p = p

    def __call__(self, seed: SeedPoint) -> Report:
        p = self.p
        report = Report(name="verify-s1")
        orbit = orbit_heights(seed.lattice, 0, p.N, p.M, p.tol)
        start = orbit.at(0)
        report.check("prop:sep(ii)", "seed_start_height", start.region is not Region.ABOVE,
                     point=seed.index, height=start.height, bound=p.M, region=start.region.value)
        later = min(s.height for s in orbit.steps if s.l >= 1)
        report.check("prop:sep(i)", "seed_min_height", later >= p.M * (1 - p.tol),
                     point=seed.index, min_height=later, bound=p.M)
        end = orbit.at(p.N).height
        report.check("prop:sep(ii)", "seed_end_height", end < 16 * p.M,
                     point=seed.index, height=end, bound=16 * p.M)
        for l, strict in ((1, True), (p.N, False)):
            norm = tracked_vector_norm(seed.t, p.M, p.d, l)
            limit = 1 / mpmath.mpf(p.M)
            ok = norm < limit if strict else norm <= limit * (1 + p.tol)
            report.check("prop:sep(i)", "tracked_vector", ok,
                         point=seed.index, l=l, norm=norm, bound=limit)
        return report


def verify_S1(
    seeds: SeedSet,
    pair_cap: int | None = None,
    pool: WorkerPool | None = None,
) -> Report:
    """Per-point height checks and pairwise separation checks for a seed set."""
    p = seeds.params
    pool = pool or WorkerPool()
    report = Report(name="verify-s1")
    for sub in pool.map(_PointCheck(p), seeds.points):
        report.merge(sub)

    slack = p.metric.slack
    near = mpmath.mpf(30) / 16 * p.side
    far = 1 / (8 * mpmath.mpf(p.M) * slack)
    sep_lo = p.cell / 4
    sep_hi = CUBE_SIDE * p.side

    g = [s.g for s in seeds.points]
    g_inv = [mat_inverse(x) for x in g]
    gN = [scale_columns(x, p.N) for x in g]
    gN_inv = [mat_inverse(x) for x in gN]
    pairs = sample_pairs(len(seeds), pair_cap, p.precision.seed)
    for i, j in pairs:
        a, b = seeds.points[i], seeds.points[j]
        spacing = max(abs(x - y) for x, y in zip(a.t, b.t))
        report.check("eqn:sep", "seed_spacing", sep_lo <= spacing < sep_hi,
                     pair=[a.index, b.index], spacing=spacing, lower=sep_lo, upper=sep_hi)
        d0 = group_dist_pre(g[i], g_inv[i], g[j], g_inv[j])
        report.check("prop:sep(iii)", "pair_start_distance", d0 < near,
                     pair=[a.index, b.index], distance=d0, bound=near)
        dN = group_dist_pre(gN[i], gN_inv[i], gN[j], gN_inv[j])
        report.check("prop:sep(iii)", "pair_end_distance", dN >= far,
                     pair=[a.index, b.index], distance=dN, bound=far, slack=slack)

    report.summary = {
        "points": len(seeds),
        "pairs": len(pairs),
        "violations": len(report.violations),
    }
    log.info("verify-s1: %d points, %d pairs, %d violations",
             len(seeds), len(pairs), len(report.violations))
    return report
