"""Tests for the diagonal flow and orbit height profiles."""

import sys
from pathlib import Path

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from core import determinant, elementary, identity  # noqa: E402
from core.errors import PrecisionExhausted  # noqa: E402
from flow import (  # noqa: E402
    FlowParams,
    apply_flow,
    check_guard,
    conjugate_by_flow,
    flow_diagonal,
    orbit_heights,
    scale_columns,
    tracked_vector_norm,
)
from geometry import group_dist  # noqa: E402
from lattice import Region, height, lattice_class  # noqa: E402


class TestFlowParams:
    """Tests for the flow exponents."""

    def test_alpha_sums_to_zero(self):
        for d in (1, 2, 3, 5):
            assert float(sum(FlowParams(d).alpha)) == pytest.approx(0, abs=1e-30)

    def test_expansion_rate(self):
        assert float(FlowParams(2).expansion_rate) == pytest.approx(1.5)
        assert float(FlowParams(3).expansion_rate) == pytest.approx(4 / 3)

    def test_rejects_zero_d(self):
        with pytest.raises(ValueError):
            FlowParams(0)


class TestTransform:
    """Tests for scalings and conjugations by a^l."""

    def test_flow_diagonal_has_det_one(self):
        assert abs(determinant(flow_diagonal(2, 7)) - 1) < mpmath.mpf(10) ** -30

    def test_scale_columns_matches_product(self):
        g = elementary(3, 0, 2, 0.3) @ elementary(3, 2, 1, -0.7)
        direct = g @ flow_diagonal(2, 3)
        scaled = scale_columns(g, 3)
        assert all(abs(a - b) < 1e-30 for a, b in zip(scaled.entries.flat, direct.entries.flat))

    def test_conjugate_by_flow(self):
        g = elementary(3, 2, 0, 0.01)
        conj = conjugate_by_flow(g, 2)
        direct = flow_diagonal(2, -2) @ g @ flow_diagonal(2, 2)
        assert all(abs(a - b) < 1e-30 for a, b in zip(conj.entries.flat, direct.entries.flat))
        # unstable row entry grows by e^{(d+1)/d·l}
        assert float(conj[2, 0]) == pytest.approx(0.01 * float(mpmath.exp(3)))

    @settings(max_examples=25, deadline=None)
    @given(
        entries=st.lists(st.floats(min_value=-0.1, max_value=0.1), min_size=4, max_size=4),
        steps=st.integers(min_value=1, max_value=3),
    )
    def test_conjugation_expands_distance_at_most_by_rate(self, entries, steps):
        g = elementary(3, 0, 1, entries[0]) @ elementary(3, 2, 0, entries[1])
        h = g @ elementary(3, 1, 2, entries[2]) @ elementary(3, 2, 1, entries[3])
        before = group_dist(g, h)
        after = group_dist(conjugate_by_flow(g, steps), conjugate_by_flow(h, steps))
        bound = mpmath.exp(steps * FlowParams(2).expansion_rate) * before
        assert after <= bound * (1 + mpmath.mpf(10) ** -20) + mpmath.mpf(10) ** -30

    def test_guard(self):
        check_guard(80, 2)
        with pytest.raises(PrecisionExhausted):
            check_guard(81, 2)
        with pytest.raises(PrecisionExhausted):
            flow_diagonal(2, -1000)

    def test_tracked_vector_norm(self):
        assert float(tracked_vector_norm([0.01, 0.02], 2, 2, 0)) == pytest.approx(0.5)
        expected = max(0.02 * float(mpmath.exp(2)), float(mpmath.exp(-4))) / 2
        assert float(tracked_vector_norm([0.01, 0.02], 2, 2, 4)) == pytest.approx(expected)


class TestApplyFlow:
    """Tests for T^l on lattices."""

    def test_zero_time_is_identity(self):
        x = lattice_class(identity(3))
        assert apply_flow(x, 0) is x

    def test_standard_lattice_heights(self):
        x = lattice_class(identity(3))
        assert float(height(apply_flow(x, 2))) == pytest.approx(float(mpmath.exp(2)))
        assert float(height(apply_flow(x, -2))) == pytest.approx(float(mpmath.exp(1)))

    def test_composition(self):
        x = lattice_class(elementary(3, 2, 0, 0.37) @ elementary(3, 2, 1, 0.11))
        stepped = apply_flow(apply_flow(x, 2), 3)
        assert float(height(stepped)) == pytest.approx(float(height(apply_flow(x, 5))), rel=1e-12)


class TestOrbitHeights:
    """Tests for orbit_heights records."""

    def test_profile_of_standard_lattice(self):
        record = orbit_heights(lattice_class(identity(3)), -2, 3, M=2)
        assert [s.l for s in record.steps] == list(range(-2, 4))
        for step in record.steps:
            expected = float(mpmath.exp(max(-step.l / 2, step.l)))
            assert float(step.height) == pytest.approx(expected)
        assert record.at(0).region is Region.BELOW
        assert record.at(3).region is Region.ABOVE
        assert float(record.max_height()) == pytest.approx(float(mpmath.exp(3)))

    def test_count_at_least(self):
        record = orbit_heights(lattice_class(identity(3)), 0, 4, M=2)
        assert record.count_at_least(2) == 4
        assert len(record.heights()) == 5

    def test_missing_time(self):
        record = orbit_heights(lattice_class(identity(3)), 0, 1, M=2)
        with pytest.raises(KeyError):
            record.at(5)

    def test_empty_range(self):
        with pytest.raises(ValueError):
            orbit_heights(lattice_class(identity(3)), 3, 1, M=2)
