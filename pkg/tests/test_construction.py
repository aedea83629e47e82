"""Tests for construction constants, the seed family, A_N and the seed set."""

import sys
from pathlib import Path

import mpmath
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from construction import (  # noqa: E402
    ConstructionParams,
    SeedPoint,
    SeedSet,
    bad_witness,
    core_grid,
    endpoint_region,
    estimate_AN_measure,
    get_sampler,
    guaranteed_cube_count,
    in_AN,
    lemma_bound,
    make_gt,
    max_symbols,
    seed_lattice,
    select_S1,
    verify_S1,
)
from construction.samplers import GridSampler, MonteCarloSampler  # noqa: E402
from core import determinant  # noqa: E402
from core.errors import ConfigInvalid, InsufficientCubes  # noqa: E402
from lattice import Region, height  # noqa: E402


@pytest.fixture(scope="module")
def params():
    return ConstructionParams(d=2, M=2.0, N=4)


@pytest.fixture(scope="module")
def seeds(params):
    return select_S1(params, K_target=8)


class TestConstructionParams:
    """Tests for defaults and validation of ConstructionParams."""

    def test_defaults(self, params):
        assert params.K == 229
        assert params.K_max == 229
        assert params.delta == pytest.approx(0.05625)
        assert params.eta == pytest.approx(0.028125)

    def test_max_symbols(self):
        assert max_symbols(2, 4) == 229
        assert max_symbols(3, 2) == 31

    def test_horizon(self, params):
        assert params.horizon(1) == 4
        assert params.horizon(2) == 18
        assert params.horizon(3) == 32
        assert params.horizon_unit == 14

    def test_derived_scales(self, params):
        assert float(params.side) == pytest.approx(float(mpmath.exp(-2)))
        assert float(params.cell) == pytest.approx(float(mpmath.exp(-6)))
        assert params.connector_tol == pytest.approx(0.05625 / (1.5**3 * 3**9))
        assert params.separation == pytest.approx(0.028125 / float(mpmath.e) ** 2)

    def test_K_above_cap(self):
        with pytest.raises(ConfigInvalid, match="229"):
            ConstructionParams(K=230)

    def test_delta_bound(self):
        with pytest.raises(ConfigInvalid, match="δ<min"):
            ConstructionParams(delta=1 / 16)

    def test_eta_below_delta(self):
        with pytest.raises(ConfigInvalid):
            ConstructionParams(delta=0.05, eta=0.05)

    def test_d1_needs_opt_in(self):
        with pytest.raises(ConfigInvalid):
            ConstructionParams(d=1)
        assert ConstructionParams(d=1, N=4, allow_d1=True).K == max_symbols(1, 4)

    def test_bad_metric(self):
        with pytest.raises(ConfigInvalid):
            ConstructionParams(c0=0.9)

    def test_small_M(self):
        with pytest.raises(ConfigInvalid):
            ConstructionParams(M=0.5)


class TestFamily:
    """Tests for g_t, A_N membership and the Diophantine witness."""

    def test_make_gt_has_det_one(self):
        g = make_gt([0.01, 0.02], 2.0, 2)
        assert abs(determinant(g) - 1) < mpmath.mpf(10) ** -30
        assert float(g[2, 0]) == pytest.approx(0.005)
        assert float(g[2, 2]) == pytest.approx(0.5)

    def test_make_gt_checks_length(self):
        with pytest.raises(ValueError):
            make_gt([0.1], 2.0, 2)

    def test_seed_lattice_height_is_M(self, params):
        x = seed_lattice([0.02, 0.03], params)
        assert float(height(x)) == pytest.approx(2.0)

    def test_witness_agrees_with_region(self, params):
        points = MonteCarloSampler().sample(params, 40, seed=11)
        for t in points:
            region = endpoint_region(t, params)
            if region is Region.BOUNDARY:
                continue
            assert in_AN(t, params) == (region is Region.BELOW)
            assert in_AN(t, params) == (bad_witness(t, params) is None)

    def test_point_near_zero_has_witness(self, params):
        t = (params.side / 32, params.side / 32)
        assert bad_witness(t, params) == ((0, 0), 1)
        assert endpoint_region(t, params) is Region.ABOVE
        assert not in_AN(t, params)


class TestSamplers:
    """Tests for grid and Monte Carlo samplers."""

    def test_get_sampler(self):
        assert isinstance(get_sampler({"scan_mode": "grid"}), GridSampler)
        assert isinstance(get_sampler({"scan_mode": "montecarlo"}), MonteCarloSampler)
        assert isinstance(get_sampler({}), MonteCarloSampler)

    def test_grid_points_in_cube(self, params):
        points = GridSampler().sample(params, 16, seed=0)
        assert len(points) == 16
        lo, hi = GridSampler.bounds(params)
        assert all(lo < x < hi for pt in points for x in pt)

    def test_monte_carlo_deterministic(self, params):
        a = MonteCarloSampler().sample(params, 5, seed=3)
        b = MonteCarloSampler().sample(params, 5, seed=3)
        c = MonteCarloSampler().sample(params, 5, seed=4)
        assert a == b
        assert a != c
        lo, hi = MonteCarloSampler.bounds(params)
        assert all(lo <= x <= hi for pt in a for x in pt)


class TestMeasure:
    """Tests for the A_N measure bound and its estimate."""

    def test_lemma_bound(self):
        bound = lemma_bound(2, 4)
        assert bound.cube_fraction == pytest.approx(1 - (4 / 15) ** 2)
        assert bound.measure == pytest.approx(((15 / 16) ** 2 - 1 / 16) * float(mpmath.exp(-4)))
        assert not bound.outside_hypothesis

    def test_lemma_bound_d1(self):
        with pytest.raises(ConfigInvalid):
            lemma_bound(1, 4)
        assert lemma_bound(1, 4, allow_d1=True).outside_hypothesis

    def test_guaranteed_cube_count(self):
        assert guaranteed_cube_count(2, 4) == 54**2 - 283

    def test_too_few_samples(self, params):
        with pytest.raises(ConfigInvalid):
            estimate_AN_measure(params, 500, MonteCarloSampler())

    def test_estimate_meets_bound(self, params):
        estimate, outcomes = estimate_AN_measure(params, 1000, MonteCarloSampler(), seed=1)
        assert estimate.samples == len(outcomes) == 1000
        assert estimate.disagreements == 0
        assert estimate.meets_bound
        assert estimate.implied_measure == pytest.approx(
            estimate.fraction * (15 / 16) ** 2 * float(mpmath.exp(-4))
        )


class TestSeedSet:
    """Tests for seed selection and verification."""

    def test_core_grid_size(self, params):
        assert len(core_grid(params, (0, 0), 4)) == 16

    def test_select(self, seeds, params):
        assert len(seeds) == 8
        assert [s.index for s in seeds.points] == list(range(1, 9))
        assert len({s.cube for s in seeds.points}) == 8
        assert all(in_AN(s.t, params) for s in seeds.points)
        assert seeds.symbol(1) is seeds.points[0]

    def test_subset(self, seeds):
        sub = seeds.subset(3)
        assert len(sub) == 3
        assert sub.symbol(3) is seeds.symbol(3)

    def test_verify_passes(self, seeds):
        report = verify_S1(seeds)
        assert report.passed
        assert report.summary["points"] == 8
        assert report.summary["pairs"] == 28
        assert report.count("seed_spacing") == 28

    def test_verify_flags_close_pair(self, seeds, params):
        twin = seeds.symbol(1)
        shifted = tuple(x + params.cell / 100 for x in twin.t)
        bad = SeedSet(params=params, points=[
            twin,
            SeedPoint(index=2, t=shifted, cube=twin.cube, lattice=seed_lattice(shifted, params)),
        ])
        report = verify_S1(bad)
        assert not report.passed
        assert any(v["kind"] == "seed_spacing" for v in report.violations)

    def test_verify_flags_seed_outside_AN(self, seeds, params):
        t = (params.side / 32, params.side / 32)
        assert not in_AN(t, params)
        bad = SeedSet(params=params, points=[
            seeds.symbol(1),
            SeedPoint(index=2, t=t, cube=(0, 0), lattice=seed_lattice(t, params)),
        ])
        report = verify_S1(bad)
        assert not report.passed
        flagged = [v for v in report.violations if v["kind"] == "seed_end_height"]
        assert [v["point"] for v in flagged] == [2]
        assert flagged[0]["height"] > 16 * params.M

    def test_too_many_seeds(self, params):
        with pytest.raises(InsufficientCubes):
            select_S1(params, K_target=params.K_max + 1)
