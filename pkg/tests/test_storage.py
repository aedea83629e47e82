"""Tests for the SQLite run store."""

import sys
from pathlib import Path

import mpmath
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from assembly import CodedPoint, Correction  # noqa: E402
from construction import ConstructionParams, SeedPoint, SeedSet, seed_lattice  # noqa: E402
from core import identity  # noqa: E402
from geometry import quotient_dist  # noqa: E402
from shadowing import unstable_element  # noqa: E402
from storage import RunStore  # noqa: E402


@pytest.fixture(scope="module")
def params():
    return ConstructionParams(d=2, M=2.0, N=4)


@pytest.fixture
def store(tmp_path):
    s = RunStore(str(tmp_path / "state.db"))
    yield s
    s.close()


def _seed_set(p):
    ts = [(0.02, 0.03), (0.05, 0.08)]
    return SeedSet(params=p, points=[
        SeedPoint(index=i + 1, t=t, cube=(i, 0), lattice=seed_lattice(t, p))
        for i, t in enumerate(ts)
    ])


def _max_diff(g, h):
    return max(abs(a - b) for a, b in zip(g.entries.flat, h.entries.flat))


class TestSeeds:
    """Tests for seed persistence."""

    def test_empty_store(self, store, params):
        assert store.load_seeds(params) is None

    def test_round_trip(self, store, params):
        seeds = _seed_set(params)
        store.save_seeds(seeds)
        loaded = store.load_seeds(params)
        assert len(loaded) == 2
        assert [s.index for s in loaded.points] == [1, 2]
        assert loaded.symbol(2).cube == (1, 0)
        assert float(loaded.symbol(1).t[1]) == pytest.approx(0.03)
        for a, b in zip(seeds.points, loaded.points):
            assert quotient_dist(a.lattice, b.lattice) < 1e-25

    def test_save_replaces(self, store, params):
        store.save_seeds(_seed_set(params))
        store.save_seeds(_seed_set(params).subset(1))
        assert len(store.load_seeds(params)) == 1

    def test_creates_parent_directory(self, tmp_path):
        s = RunStore(str(tmp_path / "nested" / "run" / "state.db"))
        assert (tmp_path / "nested" / "run" / "state.db").exists()
        s.close()


class TestCertificates:
    """Tests for named certificates."""

    def test_missing(self, store):
        assert store.get_certificate("nprime") is None

    def test_round_trip_and_replace(self, store):
        store.save_certificate("nprime", {"nprime": 10, "rate": 1.0})
        assert store.get_certificate("nprime") == {"nprime": 10, "rate": 1.0}
        store.save_certificate("nprime", {"nprime": 12, "rate": 0.995})
        assert store.get_certificate("nprime")["nprime"] == 12


class TestCodedPoints:
    """Tests for coded-point persistence."""

    def _appended(self, seeds):
        parent = CodedPoint.from_seed(seeds, 2)
        u = unstable_element([mpmath.mpf("1e-9"), mpmath.mpf("-3e-9")], 2)
        return CodedPoint(
            word=(2, 1),
            seed_rep=parent.seed_rep,
            corrections=[Correction(time=4, element=u)],
            base_rep=parent.base_rep,
            lattice=parent.lattice,
            centralizers=[identity(3)],
            connectors=[{"nprime": 10, "dist_start": 1e-9}],
            refinement=mpmath.mpf("2.5e-14"),
        )

    def test_round_trip(self, store, params):
        seeds = _seed_set(params)
        original = self._appended(seeds)
        store.save_points([original])
        (loaded,) = store.load_points(2)
        assert loaded.word == (2, 1)
        assert [c.time for c in loaded.corrections] == [4]
        assert _max_diff(loaded.corrections[0].element, original.corrections[0].element) < 1e-30
        assert _max_diff(loaded.seed_rep, original.seed_rep) < 1e-30
        assert loaded.connectors == [{"dist_start": 1e-9, "nprime": 10}]
        assert float(loaded.refinement) == pytest.approx(2.5e-14)
        assert len(loaded.centralizers) == 1

    def test_seed_words_have_no_refinement(self, store, params):
        seeds = _seed_set(params)
        store.save_points([CodedPoint.from_seed(seeds, 2), CodedPoint.from_seed(seeds, 1)])
        loaded = store.load_points(1)
        assert [pt.word for pt in loaded] == [(1,), (2,)]
        assert all(pt.refinement is None and pt.corrections == [] for pt in loaded)

    def test_lengths_and_replacement(self, store, params):
        seeds = _seed_set(params)
        store.save_points([CodedPoint.from_seed(seeds, 1), CodedPoint.from_seed(seeds, 2)])
        store.save_points([self._appended(seeds)])
        assert store.stored_lengths() == [1, 2]
        store.save_points([CodedPoint.from_seed(seeds, 1)])
        assert len(store.load_points(1)) == 1
        assert len(store.load_points(2)) == 1

    def test_empty_save_is_noop(self, store):
        store.save_points([])
        assert store.stored_lengths() == []
        assert store.load_points(3) == []
