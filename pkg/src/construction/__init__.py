"""Seed construction: the family g_t, the set A_N, its measure, and S_N′(1).

Usage:
    from construction import ConstructionParams, get_sampler, select_S1

    p = ConstructionParams(d=2, M=2, N=4)
    seeds = select_S1(p, K_target=8)
"""

from construction.base import BaseSampler
from construction.family import bad_witness, endpoint_region, in_AN, make_gt, seed_lattice
from construction.measure import (
    LemmaBound,
    MeasureEstimate,
    SampleOutcome,
    classify_samples,
    estimate_AN_measure,
    guaranteed_cube_count,
    lemma_bound,
)
from construction.params import ConstructionParams, default_delta, max_symbols
from construction.seeds import SeedPoint, SeedSet, core_grid, search_cube, select_S1, verify_S1


def get_sampler(config: dict) -> BaseSampler:
    """Create a parameter-cube sampler based on configuration.

    Args:
        config: Run settings. Uses 'scan_mode' ("grid" or "montecarlo").

    Returns:
        GridSampler for "grid" mode, MonteCarloSampler for "montecarlo" mode.
    """
    mode = config.get("scan_mode", "montecarlo")

    if mode == "grid":
        from construction.samplers import GridSampler
        return GridSampler(config)

    from construction.samplers import MonteCarloSampler
    return MonteCarloSampler(config)


__all__ = [
    "BaseSampler",
    "ConstructionParams",
    "LemmaBound",
    "MeasureEstimate",
    "SampleOutcome",
    "SeedPoint",
    "SeedSet",
    "bad_witness",
    "classify_samples",
    "core_grid",
    "default_delta",
    "endpoint_region",
    "estimate_AN_measure",
    "get_sampler",
    "guaranteed_cube_count",
    "in_AN",
    "lemma_bound",
    "make_gt",
    "max_symbols",
    "search_cube",
    "seed_lattice",
    "select_S1",
    "verify_S1",
]
