"""Tests for lattice reduction, shortest vectors and height regions."""

import sys
from pathlib import Path

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from core import GroupElement, diagonal, elementary, identity  # noqa: E402
from core.errors import SingularDrift  # noqa: E402
from lattice import (  # noqa: E402
    Region,
    check_unimodular,
    height,
    int_identity,
    integer_det,
    lattice_class,
    random_unimodular,
    region_classify,
    shortest_vector,
)
from lattice.enumeration import normalize_witness, sup_norm  # noqa: E402

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def _skewed(seed: int, size: int = 3) -> GroupElement:
    """A random integer change of basis of Z^size."""
    u = random_unimodular(np.random.default_rng(seed), size)
    return GroupElement(np.array([[mpmath.mpf(int(x)) for x in row] for row in u], dtype=object))


def _box_lambda1(rows: np.ndarray) -> float:
    """Smallest sup norm over a coefficient box large enough to hold a shortest vector."""
    column_sums = np.abs(np.linalg.inv(rows)).sum(axis=0)
    radius = int(np.ceil(np.abs(rows).max(axis=1).min() * column_sums.max()))
    r = np.arange(-radius, radius + 1)
    coeffs = np.array(np.meshgrid(r, r, r, indexing="ij")).reshape(3, -1).T
    coeffs = coeffs[np.any(coeffs != 0, axis=1)]
    return float(np.abs(coeffs @ rows).max(axis=1).min())


class TestIntegerHelpers:
    """Tests for exact integer matrix helpers."""

    def test_integer_det(self):
        assert integer_det([[2, 1], [1, 1]]) == 1
        assert integer_det([[0, 1], [1, 0]]) == -1
        assert integer_det([[1, 2], [2, 4]]) == 0

    def test_int_identity_holds_python_ints(self):
        eye = int_identity(3)
        assert type(eye[0, 0]) is int
        assert integer_det(eye.tolist()) == 1

    @settings(max_examples=30, deadline=None)
    @given(seed=seeds, size=st.integers(min_value=2, max_value=5))
    def test_random_unimodular(self, seed, size):
        u = random_unimodular(np.random.default_rng(seed), size, entry_bound=5)
        assert integer_det(u.tolist()) == 1
        assert max(abs(int(x)) for x in u.flat) <= 5


class TestHeight:
    """Tests for shortest vectors and heights."""

    def test_standard_lattice_has_height_one(self):
        x = lattice_class(identity(3))
        assert float(height(x)) == pytest.approx(1)

    def test_diagonal_lattice(self):
        x = lattice_class(diagonal([2, mpmath.mpf(1) / 2, 1]))
        assert float(height(x)) == pytest.approx(2)
        assert list(shortest_vector(x).witness) == [0, 1, 0]

    @settings(max_examples=15, deadline=None)
    @given(seed=seeds)
    def test_height_invariant_under_change_of_basis(self, seed):
        base = diagonal([3, mpmath.mpf(1) / 4, mpmath.mpf(4) / 3])
        x = lattice_class(_skewed(seed) @ base, validate=True)
        assert float(height(x)) == pytest.approx(4)

    @settings(max_examples=15, deadline=None)
    @given(seed=seeds)
    def test_witness_attains_lambda1(self, seed):
        x = lattice_class(_skewed(seed) @ diagonal([5, mpmath.mpf(1) / 3, mpmath.mpf(3) / 5]))
        report = shortest_vector(x)
        v = np.array(report.witness, dtype=object) @ x.basis.entries
        assert float(sup_norm(v)) == pytest.approx(float(report.lambda1))
        assert float(report.height * report.lambda1) == pytest.approx(1)

    @settings(max_examples=10, deadline=None)
    @given(
        seed=seeds,
        scales=st.lists(st.floats(min_value=0.5, max_value=2.0), min_size=2, max_size=2),
        shears=st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=2, max_size=2),
    )
    def test_lambda1_matches_box_search(self, seed, scales, shears):
        a0, a1 = (mpmath.mpf(v) for v in scales)
        base = (
            diagonal([a0, a1, 1 / (a0 * a1)])
            @ elementary(3, 0, 1, shears[0])
            @ elementary(3, 2, 0, shears[1])
        )
        x = lattice_class(_skewed(seed) @ base)
        expected = _box_lambda1(np.array(base.entries, dtype=float))
        assert float(shortest_vector(x).lambda1) == pytest.approx(expected, rel=1e-9)

    def test_reduction_is_unimodular(self):
        x = lattice_class(_skewed(7) @ diagonal([2, 1, mpmath.mpf(1) / 2]))
        check_unimodular(x)
        assert integer_det(x.transform.tolist()) in (1, -1)

    def test_default_build_rejects_wrong_covolume(self):
        with pytest.raises(SingularDrift):
            lattice_class(diagonal([2, 1, 1]))
        x = lattice_class(diagonal([2, 1, 1]), validate=False)
        assert float(x.height_report.lambda1) == pytest.approx(1)

    def test_normalize_witness(self):
        assert normalize_witness([1, -2, -1]) == [-1, 2, 1]
        assert normalize_witness([0, 3, 0]) == [0, 3, 0]
        assert normalize_witness([0, 0, 0]) == [0, 0, 0]


class TestRegion:
    """Tests for region_classify."""

    def test_below_boundary_above(self):
        x = lattice_class(diagonal([2, mpmath.mpf(1) / 2, 1]))
        assert region_classify(x, 3) is Region.BELOW
        assert region_classify(x, 2) is Region.BOUNDARY
        assert region_classify(x, 1.5) is Region.ABOVE

    def test_band_width(self):
        x = lattice_class(diagonal([2, mpmath.mpf(1) / 2, 1]))
        assert region_classify(x, 2 * (1 + 1e-6), tol=1e-9) is Region.BELOW
        assert region_classify(x, 2 * (1 + 1e-6), tol=1e-3) is Region.BOUNDARY

    def test_region_values(self):
        assert Region.BELOW.value == "Below"
        assert Region("Above") is Region.ABOVE
