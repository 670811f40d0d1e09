import pytest

from qplane.errors import PreconditionError
from qplane.qtopology import (
    DiskUnion,
    QHull,
    is_q_spiraling,
    is_quasicompact_d,
    point_q_closure,
    qhull_contains,
    spiral_neighborhood,
)

Q = 0.5


def base_disk():
    return DiskUnion.single(1.0, 0.1)


class TestQHullMembership:
    def test_origin_always_inside(self):
        hull = QHull(base_disk(), Q)
        assert qhull_contains(hull, 0.0)

    def test_halved_point_inside(self):
        # n = 1 copy of B(1, 0.1) is B(0.5, 0.05)
        hull = QHull(base_disk(), Q)
        assert qhull_contains(hull, 0.5)

    def test_point_between_copies_outside(self):
        # 0.3 misses B(1,.1), B(.5,.05), B(.25,.025), and every later
        # copy has reach below 0.3
        hull = QHull(base_disk(), Q)
        assert not qhull_contains(hull, 0.3)

    def test_boundary_is_excluded(self):
        hull = QHull(base_disk(), Q)
        assert not qhull_contains(hull, 1.1)
        assert qhull_contains(hull, 1.0999999)

    def test_rotating_q_follows_spiral(self):
        q = 0.5j
        hull = QHull(base_disk(), q)
        assert qhull_contains(hull, 0.5j)
        assert not qhull_contains(hull, 0.5)

    def test_requires_contractive_q(self):
        with pytest.raises(PreconditionError):
            QHull(base_disk(), 1.5)
        with pytest.raises(PreconditionError):
            QHull(base_disk(), 0.0)

    def test_empty_base(self):
        hull = QHull(DiskUnion(), Q)
        assert qhull_contains(hull, 0.0)
        assert not qhull_contains(hull, 0.25)

    def test_idempotent_on_random_points(self, rng):
        hull = QHull(base_disk(), Q)
        hull2 = QHull(hull, Q)
        pts = rng.uniform(-1.2, 1.2, (1000, 2))
        for re, im in pts:
            z = complex(re, im)
            assert hull2.contains(z) == hull.contains(z)

    def test_q_stability_of_members(self, rng):
        hull = QHull(base_disk(), Q)
        pts = rng.uniform(-1.2, 1.2, (2000, 2))
        members = [complex(re, im) for re, im in pts if hull.contains(complex(re, im))]
        assert members
        for z in members:
            assert hull.contains(Q * z)


class TestSpiralNeighborhood:
    def test_example_disk_chain(self):
        du = spiral_neighborhood(1.0, 0.3, 0.1, Q)
        # base disk plus the m = 0, 1 orbit disks; (1/2)^2 * 1.1 <= 0.3
        assert len(du.disks) == 3
        assert du.disks[0].center == 0 and du.disks[0].radius == 0.3
        assert du.disks[1].center == 1.0 and du.disks[1].radius == 0.1
        assert du.disks[2].center == 0.5 and du.disks[2].radius == 0.05

    def test_covers_forward_orbit(self):
        du = spiral_neighborhood(1.0, 0.3, 0.1, Q)
        for m in range(11):
            assert du.contains(Q**m * 1.0)
        assert du.contains(0.0)

    def test_shrinking_delta_never_adds_points(self, rng):
        big = spiral_neighborhood(1.0, 0.3, 0.1, Q)
        small = spiral_neighborhood(1.0, 0.3, 0.02, Q)
        pts = rng.uniform(-1.2, 1.2, (500, 2))
        for re, im in pts:
            z = complex(re, im)
            if small.contains(z):
                assert big.contains(z)

    def test_bounded(self):
        du = spiral_neighborhood(1.0, 0.3, 0.1, Q)
        assert du.bounding_radius() <= max(1.0 + 0.1, 0.3) + 1e-15

    def test_rejects_zero_orbit_point(self):
        with pytest.raises(PreconditionError):
            spiral_neighborhood(0.0, 0.3, 0.1, Q)


class TestPointClosure:
    def test_zero_stays_zero(self):
        assert set(point_q_closure(0.0, 3, Q)) == {0.0}

    def test_real_doubling(self):
        assert point_q_closure(1.0, 2, Q) == [1.0, 2.0, 4.0]

    def test_complex_division(self):
        out = point_q_closure(1j, 1, 0.5j)
        assert out[0] == 1j
        assert out[1] == pytest.approx(2.0)

    def test_magnitudes_grow_exactly(self):
        out = point_q_closure(0.7 + 0.1j, 6, Q)
        mags = [abs(z) for z in out]
        for k, m in enumerate(mags):
            assert m == pytest.approx(abs(0.7 + 0.1j) * 2.0**k, rel=1e-14)


class TestQuasicompact:
    def test_empty_set(self):
        assert is_quasicompact_d(DiskUnion())

    def test_finite_union(self):
        assert is_quasicompact_d(DiskUnion([(0.0, 1.0), (5.0 + 1j, 0.3)]))

    def test_hull_of_bounded_base(self):
        assert is_quasicompact_d(QHull(base_disk(), Q))

    def test_point_list(self):
        assert is_quasicompact_d([0.0, 1.0 + 2j])
        assert is_quasicompact_d([])


class TestIsQSpiraling:
    def test_origin_disk_is_spiraling(self):
        assert is_q_spiraling(DiskUnion.single(0.0, 0.7), Q, samples=2000, seed=3)

    def test_off_origin_disk_is_not(self):
        assert not is_q_spiraling(base_disk(), Q, samples=100, seed=3)

    def test_hull_is_spiraling(self):
        hull = QHull(base_disk(), Q)
        assert is_q_spiraling(hull, Q, samples=10_000, seed=3)

    def test_spiral_neighborhood_union_is_spiraling(self):
        du = spiral_neighborhood(1.0, 0.3, 0.1, Q)
        assert is_q_spiraling(du, Q, samples=5000, seed=3)
