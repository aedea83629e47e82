"""Tests for connectors, coded points, the m-level build and its checks."""

import sys
from pathlib import Path

import mpmath
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from assembly import (  # noqa: E402
    CodedPoint,
    append_symbol,
    build_S_m,
    centralizer_bound,
    certify_eta,
    check_separated,
    first_difference,
    find_connector,
    get_connector,
    iii_budget,
    scan_nprime,
    tracking_bound,
    tracking_report,
    verify_S_m,
)
from assembly.shooting import ShootingConnector, start_offset  # noqa: E402
from construction import (  # noqa: E402
    ConstructionParams,
    SeedPoint,
    SeedSet,
    seed_lattice,
    select_S1,
)
from core import diagonal, identity, sup_dev  # noqa: E402
from core.errors import BudgetExceeded, CertificationFailed, ConnectorNotFound  # noqa: E402
from flow import apply_flow, scale_columns  # noqa: E402
from geometry import quotient_dist  # noqa: E402
from lattice import lattice_class  # noqa: E402
from shadowing import stable_element, unstable_element  # noqa: E402

DELTA = 0.05625


@pytest.fixture(scope="module")
def params():
    return ConstructionParams(d=2, M=2.0, N=4)


@pytest.fixture(scope="module")
def seeds(params):
    return select_S1(params, K_target=8)


def _on_unstable_leaf(y, nprime, s_star, w=(0, 0), c_star=None):
    """Lattice T^{N′}(y·u⁺(s*)·c*·u⁻(w)): a target on the unstable leaf through y.

    A connector from y reaches it exactly, so these targets test the Newton
    solve itself rather than the existence of a connection.
    """
    rep = y.basis @ unstable_element(s_star, 2)
    if c_star is not None:
        rep = rep @ c_star
    rep = rep @ stable_element(w, 2)
    return lattice_class(scale_columns(rep, nprime))


def _centralizer(eps):
    """diag(1 + eps, 1/(1 + eps), 1), which commutes with the flow."""
    one = mpmath.mpf(1)
    return diagonal([one + eps, one / (one + eps), one])


def _leaf_linked_seeds(p, count=2):
    """A real seed followed by points on the unstable leaf of its endpoint.

    Seeds 2..count sit at T^{N′} of the endpoint shifted by distinct small
    unstable offsets, so every word starting with symbol 1 can be extended.
    """
    t1 = (0.05, 0.08)
    first = seed_lattice(t1, p)
    endpoint = lattice_class(scale_columns(first.basis, p.N))
    points = [SeedPoint(index=1, t=t1, cube=(0, 0), lattice=first)]
    for k in range(2, count + 1):
        target = _on_unstable_leaf(endpoint, p.Nprime, (1e-10 * k, -1e-10), (1e-7, -2e-7))
        points.append(SeedPoint(index=k, t=(0.0, 0.0), cube=(0, k - 1), lattice=target))
    return SeedSet(params=p, points=points)


def _real_pair(seeds, p, i=1, j=2):
    """(x_j, T^N(x_i)): the pair a connector must join when j follows i."""
    return seeds.symbol(j).lattice, apply_flow(seeds.symbol(i).lattice, p.N)


class TestBudgets:
    """Tests for the separation and tracking budgets."""

    def test_iii_budget_single_symbol(self):
        assert iii_budget(1, 1, DELTA) == DELTA

    def test_iii_budget_last_index(self):
        assert iii_budget(3, 3, DELTA) == pytest.approx(DELTA * (1 - 1 / 81))

    def test_iii_budget_early_index(self):
        assert iii_budget(3, 1, DELTA) == pytest.approx(DELTA * (1 - 1 / 27 - 1 / 81))
        assert iii_budget(2, 1, DELTA) == pytest.approx(DELTA * (1 - 1 / 27))

    def test_iii_budget_stays_positive(self):
        for m in range(1, 12):
            for n in range(1, m + 1):
                assert DELTA / 2 < iii_budget(m, n, DELTA) <= DELTA

    def test_tracking_bound_below_delta_over_18(self):
        for m in range(1, 15):
            for n in range(m):
                assert tracking_bound(m, n, DELTA) < DELTA / 18
        assert tracking_bound(1, 0, DELTA) == pytest.approx(DELTA * (1 / 27 + 1 / 81))

    def test_first_difference(self):
        assert first_difference((1, 2, 3), (1, 4, 3)) == 2
        assert first_difference((1, 2), (2, 2)) == 1
        assert first_difference((1, 2), (1, 2)) is None

    def test_shadow_bounds(self, params):
        assert centralizer_bound(params) == pytest.approx(DELTA / (1.5 * 3**6))


class TestConnector:
    """Tests for the shooting connector."""

    def test_get_connector(self):
        connector = get_connector({"connector_starts": 3, "connector_budget": 7, "seed": 1})
        assert isinstance(connector, ShootingConnector)
        assert connector.starts == 3
        assert connector.max_step == 7

    def test_start_points(self):
        connector = ShootingConnector({"connector_starts": 4})
        points = connector.start_points(2, 1e-6, 10)
        assert len(points) == 4
        assert all(v == 0 for v in points[0])
        assert all(abs(v) <= 5e-7 for pt in points for v in pt)
        assert points == connector.start_points(2, 1e-6, 10)

    def test_start_offset(self):
        assert start_offset([0, 0], identity(3), 2) == 0
        assert float(start_offset([3e-7, 0], identity(3), 2)) == pytest.approx(3e-7)
        assert float(start_offset([0, 0], _centralizer(1e-6), 2)) == pytest.approx(1e-6, rel=1e-5)

    def test_solves_unstable_leaf_target(self, params):
        y = seed_lattice((0.05, 0.08), params)
        x = _on_unstable_leaf(y, 5, (3e-7, -2e-7), (1e-6, 1e-6))
        result = ShootingConnector().find(x, y, params, nprime=5)
        assert result.success
        assert result.nprime == 5
        assert result.info["status"] == "converged"
        assert float(result.dist_start) == pytest.approx(3e-7, rel=1e-3)
        assert result.dist_end < params.connector_tol

    def test_moves_centralizer_mismatch_to_start(self, params):
        y = seed_lattice((0.05, 0.08), params)
        x = _on_unstable_leaf(y, 5, (1e-7, 0), c_star=_centralizer(2e-7))
        result = ShootingConnector({"connector_starts": 1}).find(x, y, params, nprime=5)
        assert result.success
        assert result.info["status"] == "converged"
        assert result.info["c_start"] == pytest.approx(2e-7, rel=1e-2)
        assert result.dist_start < params.connector_tol
        assert result.dist_end < 1e-12

    def test_centralizer_outside_start_ball(self, params):
        y = seed_lattice((0.05, 0.08), params)
        x = _on_unstable_leaf(y, 5, (0, 0), c_star=_centralizer(1e-3))
        connector = ShootingConnector({"connector_starts": 2})
        with pytest.raises(ConnectorNotFound) as exc:
            connector.find(x, y, params, nprime=5)
        best = exc.value.best
        assert best.info["status"] == "centralizer exceeds start ball"
        assert best.dist_start < params.connector_tol
        assert best.info["c_start"] == 0
        assert best.dist_end > params.connector_tol

    def test_find_connector_default_length(self, params):
        y = seed_lattice((0.05, 0.08), params)
        x = _on_unstable_leaf(y, params.Nprime, (2e-10, -1e-10), (1e-7, -2e-7))
        result = find_connector(x, y, params)
        assert result.success
        assert result.nprime == params.Nprime

    def test_unreachable_target(self, params):
        y = seed_lattice((0.05, 0.08), params)
        connector = ShootingConnector({"connector_starts": 2, "connector_budget": 3})
        with pytest.raises(ConnectorNotFound) as exc:
            connector.find(lattice_class(scale_columns(y.basis, 2)), y, params,
                           tol=1e-12, nprime=1)
        assert exc.value.best.dist_start < 1e-12

    @pytest.mark.parametrize("i,j", [(1, 2), (2, 3), (4, 1)])
    def test_seed_pairs_keep_start_in_ball(self, seeds, params, i, j):
        x, y = _real_pair(seeds, params, i, j)
        connector = ShootingConnector({"connector_starts": 3, "connector_budget": 6})
        tol = params.connector_tol
        try:
            result = connector.find(x, y, params)
        except ConnectorNotFound as exc:
            result = exc.best
            assert result is not None
            assert not result.success
        else:
            assert result.dist_end < tol
        assert result.dist_start < tol
        assert result.info["c_start"] < tol
        assert max(abs(v) for v in result.info["s"]) < tol

    def test_scan_nprime(self, params):
        ys = [seed_lattice(t, params) for t in ((0.05, 0.08), (0.02, 0.11))]
        pairs = [(_on_unstable_leaf(y, 3, (1e-7, 1e-7), (1e-6, 0)), y) for y in ys]
        nprime, rate, outcomes = scan_nprime(pairs, params, 3, 3)
        assert nprime == 3
        assert rate == 1.0
        assert [o.index for o in outcomes] == [0, 1]
        assert all(o.success for o in outcomes)

    def test_scan_nprime_on_seed_pairs(self, seeds, params):
        pairs = [_real_pair(seeds, params, 1, 2), _real_pair(seeds, params, 3, 4)]
        connector = ShootingConnector({"connector_starts": 2, "connector_budget": 4})
        with pytest.raises(ConnectorNotFound, match="connector rate"):
            scan_nprime(pairs, params, 2, 3, connector)

    def test_scan_nprime_rejects_bad_input(self, params):
        with pytest.raises(ValueError):
            scan_nprime([], params, 1, 3)
        y = seed_lattice((0.05, 0.08), params)
        with pytest.raises(ValueError):
            scan_nprime([(y, y)], params, 4, 2)


class TestAppend:
    """Tests for append_symbol."""

    def test_from_seed(self, seeds, params):
        point = append_symbol(None, 1, seeds, params)
        assert point.word == (1,)
        assert point.m == 1
        assert point.corrections == []
        assert point.lattice is seeds.symbol(1).lattice

    def test_seed_pair_without_connector(self, seeds, params):
        parent = CodedPoint.from_seed(seeds, 1)
        connector = ShootingConnector({"connector_starts": 2, "connector_budget": 4})
        with pytest.raises(ConnectorNotFound):
            append_symbol(parent, 2, seeds, params, connector)

    def test_append(self, params):
        seeds = _leaf_linked_seeds(params)
        parent = CodedPoint.from_seed(seeds, 1)
        point = append_symbol(parent, 2, seeds, params, ShootingConnector())
        assert point.word == (1, 2)
        assert [c.time for c in point.corrections] == [params.N, params.N + params.Nprime]
        assert len(point.centralizers) == 1
        assert sup_dev(point.centralizers[0]) < centralizer_bound(params)
        assert point.refinement < 1e-12
        assert point.replay_error(params) < 1e-25
        assert point.connectors[0]["dist_start"] < params.connector_tol
        assert point.connectors[0]["nprime"] == params.Nprime

    def test_append_keeps_prefix(self, params):
        seeds = _leaf_linked_seeds(params, count=3)
        parent = CodedPoint.from_seed(seeds, 1)
        for j in (2, 3):
            point = append_symbol(parent, j, seeds, params)
            assert point.word[:-1] == parent.word
            assert point.seed_rep is parent.seed_rep
            assert point.corrections[:len(parent.corrections)] == parent.corrections
            assert quotient_dist(point.lattice, parent.lattice) < 1e-10

    def test_append_reaches_seed(self, params):
        seeds = _leaf_linked_seeds(params)
        point = append_symbol(CodedPoint.from_seed(seeds, 1), 2, seeds, params)
        arrived = lattice_class(scale_columns(point.base_rep, params.horizon(1) + params.Nprime))
        assert quotient_dist(arrived, seeds.symbol(2).lattice) < 1e-10


class TestBuild:
    """Tests for build_S_m and verify_S_m."""

    def test_budget(self, seeds, params):
        with pytest.raises(BudgetExceeded):
            build_S_m(seeds, 5, 8, params, budget=10_000)

    def test_bad_arguments(self, seeds, params):
        with pytest.raises(ValueError):
            build_S_m(seeds, 0, 2, params)
        with pytest.raises(ValueError):
            build_S_m(seeds, 1, 9, params)

    def test_single_symbol_words(self, seeds, params):
        points = build_S_m(seeds, 1, 3, params)
        assert [pt.word for pt in points] == [(1,), (2,), (3,)]
        assert points[1].lattice is seeds.symbol(2).lattice

    def test_verify_single_symbol_words(self, seeds, params):
        points = build_S_m(seeds, 1, 8, params)
        report = verify_S_m(points, seeds, params)
        assert report.passed
        assert report.summary == {"points": 8, "pairs": 28, "m": 1, "violations": 0}
        assert report.count("pair_margin") == 28
        assert all(pt.orbit is not None for pt in points)

    def test_two_symbol_build_on_seeds(self, seeds, params):
        connector = ShootingConnector({"connector_starts": 2, "connector_budget": 4})
        with pytest.raises(ConnectorNotFound):
            build_S_m(seeds, 2, 2, params, connector=connector)

    def test_verify_two_symbol_words(self, params):
        seeds = _leaf_linked_seeds(params, count=3)
        parent = CodedPoint.from_seed(seeds, 1)
        points = [append_symbol(parent, j, seeds, params) for j in (2, 3)]
        report = verify_S_m(points, seeds, params)
        assert report.summary["points"] == 2
        assert report.summary["pairs"] == 1
        assert report.summary["m"] == 2
        assert report.count("pair_margin") == 1
        margin = next(r for r in report.records if r["kind"] == "pair_margin")
        assert margin["n"] == 2
        assert margin["time"] == params.horizon_unit + params.N

    def test_verify_rejects_mixed_lengths(self, params):
        seeds = _leaf_linked_seeds(params)
        a = CodedPoint.from_seed(seeds, 1)
        b = append_symbol(a, 2, seeds, params)
        with pytest.raises(ValueError):
            verify_S_m([a, b], seeds, params)
        with pytest.raises(ValueError):
            verify_S_m([], seeds, params)

    def test_tracking_of_seed_words(self, seeds, params):
        point = CodedPoint.from_seed(seeds, 4)
        report = tracking_report(point, seeds, params)
        assert report.passed
        assert report.count("tracking") == params.N + 1
        assert report.count("height_floor") == params.N + 1


class TestSeparation:
    """Tests for check_separated and the η certificate."""

    def test_neighbouring_seeds_separate(self, seeds, params):
        ok, first = check_separated(seeds.symbol(1).lattice, seeds.symbol(2).lattice,
                                    params.N, params.separation, params)
        assert ok
        assert 0 <= first <= params.N

    def test_point_not_separated_from_itself(self, seeds, params):
        x = seeds.symbol(1).lattice
        assert check_separated(x, x, 3, params.separation) == (False, None)

    def test_certify_eta(self, seeds, params):
        points = build_S_m(seeds, 1, 8, params)
        cert = certify_eta(points, params, sample_cap=200)
        assert cert.eta < params.delta
        assert cert.points == 40
        assert cert.M_prime >= 2
        assert cert.configured == params.eta

    def test_certify_eta_needs_points(self, params):
        with pytest.raises(CertificationFailed):
            certify_eta([], params)
