"""Measure of A_N: the analytic lower bound and its sampled estimate."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import mpmath

from construction.base import BaseSampler
from construction.family import bad_witness, endpoint_region
from construction.params import ConstructionParams
from core.errors import ConfigInvalid
from lattice import Region
from utils.pool import WorkerPool

log = logging.getLogger("cusplab.construction.measure")

MIN_SAMPLES = 1000
Z95 = 1.959963984540054


@dataclass(frozen=True)
class LemmaBound:
    measure: float  # ((15/16)^d − 1/4^d)·e^{-N}
    cube_fraction: float  # 1 − (4/15)^d
    outside_hypothesis: bool  # d = 1 is computed but not covered by the lemma


def lemma_bound(d: int, N: int, allow_d1: bool = False) -> LemmaBound:
    if d < 1 or (d == 1 and not allow_d1):
        raise ConfigInvalid(f"The measure bound needs d >= 2 (d = 1 via allow_d1), got d = {d}")
    measure = ((mpmath.mpf(15) / 16) ** d - mpmath.mpf(1) / 4**d) * mpmath.exp(-N)
    fraction = 1 - (mpmath.mpf(4) / 15) ** d
    return LemmaBound(measure=float(measure), cube_fraction=float(fraction),
                      outside_hypothesis=d == 1)


def guaranteed_cube_count(d: int, N: int) -> int:
    """⌊e^N⌋^d − ⌈(4/13)^d·e^{dN}⌉ inner cubes are guaranteed to meet A_N′."""
    per_axis = int(mpmath.floor(mpmath.exp(N)))
    missing = int(mpmath.ceil((mpmath.mpf(4) / 13) ** d * mpmath.exp(d * N)))
    return per_axis**d - missing


@dataclass(frozen=True)
class SampleOutcome:
    t: tuple
    region: Region  # of T^N(x_t) against 16M
    witness: bool

    @property
    def in_an(self) -> bool:
        return self.region is Region.BELOW

    @property
    def disagrees(self) -> bool:
        if self.region is Region.BOUNDARY:
            return False
        return self.in_an == self.witness


@dataclass(frozen=True)
class MeasureEstimate:
    fraction: float
    ci95: float  # binomial 95% half-width
    samples: int
    hits: int
    boundary: int
    disagreements: int
    bound: LemmaBound
    cube_volume: float

    @property
    def implied_measure(self) -> float:
        return self.fraction * self.cube_volume

    @property
    def stderr(self) -> float:
        return self.ci95 / Z95

    @property
    def meets_bound(self) -> bool:
        """fraction ≥ 1 − (4/15)^d within three standard errors."""
        return self.fraction >= self.bound.cube_fraction - 3 * self.stderr


class _Classifier:
    def __init__(self, p: ConstructionParams) -> None:
        self.p = p

    def __call__(self, t: tuple) -> SampleOutcome:
        return SampleOutcome(
            t=t,
            region=endpoint_region(t, self.p),
            witness=bad_witness(t, self.p) is not None,
        )


def classify_samples(
    p: ConstructionParams, points: list[tuple], pool: WorkerPool | None = None
) -> list[SampleOutcome]:
    pool = pool or WorkerPool()
    return pool.map(_Classifier(p), points)


def estimate_AN_measure(
    p: ConstructionParams,
    samples: int,
    sampler: BaseSampler,
    seed: int | None = None,
    pool: WorkerPool | None = None,
) -> tuple[MeasureEstimate, list[SampleOutcome]]:
    """Fraction of the restricted cube lying in A_N, with the witness cross-check."""
    if samples < MIN_SAMPLES:
        raise ConfigInvalid(f"samples must be >= {MIN_SAMPLES}, got {samples}")
    seed = p.precision.seed if seed is None else seed
    points = sampler.sample(p, samples, seed)
    outcomes = classify_samples(p, points, pool)

    n = len(outcomes)
    hits = sum(o.in_an for o in outcomes)
    fraction = hits / n
    ci95 = Z95 * (fraction * (1 - fraction) / n) ** 0.5
    cube_volume = float((mpmath.mpf(15) / 16) ** p.d * mpmath.exp(-p.N))
    estimate = MeasureEstimate(
        fraction=fraction,
        ci95=ci95,
        samples=n,
        hits=hits,
        boundary=sum(o.region is Region.BOUNDARY for o in outcomes),
        disagreements=sum(o.disagrees for o in outcomes),
        bound=lemma_bound(p.d, p.N, p.allow_d1),
        cube_volume=cube_volume,
    )
    log.info("A_N fraction %.5f ± %.5f over %d samples (bound %.5f, %d disagreements)",
             fraction, ci95, n, estimate.bound.cube_fraction, estimate.disagreements)
    return estimate, outcomes
