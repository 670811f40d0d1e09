import math

import numpy as np
import pytest

from qplane import opcalc as oc
from qplane import qalgebra as qa
from qplane.errors import PreconditionError
from qplane.holo import HoloSeries, log_series
from qplane.qalgebra import QSeries

from oracles import random_qseries

Q = 0.5
LOG32 = math.log(1.5)


def log_xy_rep(q=Q, terms=40, degree=40, r=math.sqrt(1.5)):
    """ln(3/2 + xy) as a function rep: f_n(x) = c_n q^(n(n-1)/2) x^n."""
    f_list = [HoloSeries.monomial(degree, 0, LOG32)]
    for n in range(1, terms + 1):
        cn = (-1) ** (n + 1) / n * (2.0 / 3.0) ** n * q ** (n * (n - 1) // 2)
        if n <= degree:
            f_list.append(HoloSeries.monomial(degree, n, cn))
        else:
            f_list.append(HoloSeries.zero(degree))
    return oc.QFunctionRep(q, tuple(f_list), r, r)


def second_example_rep(q=Q, terms=40, degree=40, r=1.5 - 1e-9):
    """ln(3/2+x) + sum (2/3)^n (ln(3/2+1/n+x) - ln(3/2+1/n)) y^n + y/(y-3/2).

    The geometric part expands as -sum_n (2/3)^n y^n, folding a constant
    into every y-coefficient.
    """
    f_list = [log_series(1.5, degree)]
    for n in range(1, terms + 1):
        cn = (2.0 / 3.0) ** n
        coeffs = cn * log_series(1.5 + 1.0 / n, degree).coeffs.copy()
        coeffs[0] = -cn
        f_list.append(HoloSeries(coeffs))
    return oc.QFunctionRep(q, tuple(f_list), r, r)


class TestModelPair:
    def test_smallest_truncation(self):
        pair = oc.model_pair(Q, 1)
        assert np.array_equal(pair.t, [[0.0]])
        assert np.array_equal(pair.s, [[1.0]])

    def test_diagonal_entries(self):
        pair = oc.model_pair(Q, 3)
        assert np.allclose(np.diag(pair.s), [1.0, 0.5, 0.25])
        assert pair.t[1, 0] == 1.0 and pair.t[0, 0] == 0.0

    def test_relation_exact_at_64(self):
        pair = oc.model_pair(Q, 64)
        assert pair.residual() == 0.0

    def test_rejects_zero_dimension(self):
        with pytest.raises(PreconditionError):
            oc.model_pair(Q, 0)

    def test_complex_q(self):
        pair = oc.model_pair(0.3 + 0.4j, 16)
        scale = np.linalg.norm(pair.t) * np.linalg.norm(pair.s)
        assert pair.residual() <= 1e-15 * scale


class TestResidual:
    def test_commuting_pair_at_q_one(self):
        eye = np.eye(3)
        assert oc.qcommutation_residual(eye, eye, 1.0) == 0.0

    def test_shift_does_not_q_commute_with_itself(self):
        # T S - 2 S T with S = T leaves -T^2, a single unit entry
        t = np.zeros((3, 3))
        t[1, 0] = t[2, 1] = 1.0
        assert oc.qcommutation_residual(t, t, Q) == pytest.approx(1.0)

    def test_pair_constructor_rejects_violation(self):
        t = np.zeros((3, 3))
        t[1, 0] = t[2, 1] = 1.0
        with pytest.raises(PreconditionError, match="not q-commuting"):
            oc.OperatorPair(t, t, Q)


class TestCalc:
    def test_constant_gives_identity(self):
        rep = oc.QFunctionRep(Q, (HoloSeries.one(4),), 2.0, 2.0)
        pair = oc.model_pair(Q, 6)
        assert np.array_equal(oc.calc(rep, pair), np.eye(6))

    def test_log_example_diagonal(self):
        pair = oc.model_pair(Q, 32)
        a = oc.calc(log_xy_rep(), pair)
        assert np.max(np.abs(np.diag(a) - LOG32)) <= 1e-12
        assert np.max(np.abs(np.triu(a, 1))) == 0.0

    def test_spectrum_precondition_names_y_radius(self):
        rep = oc.QFunctionRep(Q, (HoloSeries.one(4),), 2.0, 0.5)
        pair = oc.model_pair(Q, 8)
        with pytest.raises(PreconditionError, match="spectrum outside domain.*r_y"):
            oc.calc(rep, pair)

    def test_spectrum_precondition_names_x_radius(self):
        # swap the model: (S, T) q-commutes for 1/q, and its first slot
        # has spectral radius 1
        base = oc.model_pair(Q, 8)
        pair = oc.OperatorPair(base.s, base.t, 1.0 / Q)
        rep = oc.QFunctionRep(1.0 / Q, (HoloSeries.one(4),), 0.5, 2.0)
        with pytest.raises(PreconditionError, match="spectrum outside domain.*r_x"):
            oc.calc(rep, pair)

    def test_q_mismatch(self):
        rep = oc.QFunctionRep(0.25, (HoloSeries.one(4),), 2.0, 2.0)
        with pytest.raises(PreconditionError, match="q mismatch"):
            oc.calc(rep, oc.model_pair(Q, 4))


class TestCalcQSeries:
    def test_x_maps_to_t(self):
        pair = oc.model_pair(Q, 5)
        x = QSeries.monomial(Q, 3, 1, 0)
        assert np.array_equal(oc.calc_qseries(x, pair), pair.t)

    def test_reordered_product_maps_to_st(self):
        pair = oc.model_pair(Q, 5)
        y = QSeries.monomial(Q, 3, 0, 1)
        x = QSeries.monomial(Q, 3, 1, 0)
        yx = qa.qmul(y, x)  # q * (x y)
        assert np.allclose(oc.calc_qseries(yx, pair), pair.s @ pair.t, atol=1e-15)

    def test_homomorphism_on_random_polynomials(self, rng):
        pair = oc.model_pair(Q, 16)
        for _ in range(10):
            f = random_qseries(rng, Q, 8, 4, 3)
            g = random_qseries(rng, Q, 8, 4, 3)
            lhs = oc.calc_qseries(qa.qmul(f, g), pair)
            rhs = oc.calc_qseries(f, pair) @ oc.calc_qseries(g, pair)
            assert np.max(np.abs(lhs - rhs)) <= 1e-10

    def test_agrees_with_function_route(self, rng):
        pair = oc.model_pair(Q, 12)
        f = random_qseries(rng, Q, 6, 5, 3)
        rep = oc.qseries_to_qfunction(f, 2.0, 2.0)
        assert np.allclose(oc.calc(rep, pair), oc.calc_qseries(f, pair), atol=1e-13)

    def test_triangular_diagonal_matches_character_values(self, rng):
        pair = oc.model_pair(Q, 12)
        f = random_qseries(rng, Q, 6, 6, 4)
        a = oc.calc_qseries(f, pair)
        rep = oc.qseries_to_qfunction(f, 2.0, 2.0)
        for m in range(pair.n):
            expected = rep.char_value((0.0, Q**m))
            assert a[m, m] == pytest.approx(expected, abs=1e-12)


class TestQfMul:
    def test_calculus_is_multiplicative(self, rng):
        pair = oc.model_pair(Q, 12)
        for _ in range(5):
            f = oc.qseries_to_qfunction(random_qseries(rng, Q, 8, 4, 3), 2.0, 2.0)
            g = oc.qseries_to_qfunction(random_qseries(rng, Q, 8, 4, 3), 2.0, 2.0)
            lhs = oc.calc(oc.qf_mul(f, g), pair)
            rhs = oc.calc(f, pair) @ oc.calc(g, pair)
            assert np.max(np.abs(lhs - rhs)) <= 1e-10


class TestEigenvalues:
    def test_identity(self):
        assert np.allclose(oc.eigenvalues(np.eye(5)), np.ones(5))

    def test_model_diagonal(self):
        pair = oc.model_pair(Q, 4)
        ev = np.sort(oc.eigenvalues(pair.s).real)[::-1]
        assert np.allclose(ev, [1.0, 0.5, 0.25, 0.125])

    def test_truncated_shift_is_nilpotent(self):
        pair = oc.model_pair(Q, 4)
        assert np.allclose(oc.eigenvalues(pair.t), 0.0)


class TestHarteModelSpectrum:
    def test_analytic_branches(self):
        desc = oc.harte_model_spectrum(Q, 8, "analytic")
        assert desc.x_disk_radius == 1.0
        assert desc.y_points == tuple(Q**m for m in range(8)) + (0j,)

    def test_numerical_branches(self):
        desc = oc.harte_model_spectrum(Q, 8, "numerical")
        assert np.allclose(desc.x_points, 0.0)
        got = np.sort(np.asarray(desc.y_points).real)
        assert np.allclose(got, np.sort([Q**m for m in range(8)]))

    def test_analytic_needs_contractive_q(self):
        with pytest.raises(PreconditionError):
            oc.harte_model_spectrum(2.0, 4, "analytic")


class TestSpectralMapping:
    def test_constant_function(self):
        rep = oc.QFunctionRep(Q, (HoloSeries.monomial(4, 0, 2.5),), 2.0, 2.0)
        report = oc.spectral_mapping_check(rep, oc.model_pair(Q, 6))
        assert report.max_distance <= 1e-13
        assert all(abs(ev - 2.5) <= 1e-13 for ev in report.eigenvalues)

    def test_coordinate_function_y(self):
        # f = y: the matrix is S and the prediction is the orbit itself
        rep = oc.QFunctionRep(
            Q, (HoloSeries.zero(4), HoloSeries.one(4)), 2.0, 2.0
        )
        report = oc.spectral_mapping_check(rep, oc.model_pair(Q, 6))
        assert report.max_distance <= 1e-13

    def test_log_example_is_singleton(self):
        report = oc.spectral_mapping_check(log_xy_rep(), oc.model_pair(Q, 32))
        assert report.max_distance <= 1e-8
        assert all(abs(p - LOG32) <= 1e-12 for p in report.predicted)

    def test_second_example_orbit_values(self):
        report = oc.spectral_mapping_check(second_example_rep(), oc.model_pair(Q, 24))
        assert report.max_distance <= 1e-6
        predicted = sorted(p.real for p in report.predicted)
        expected = sorted(LOG32 + Q**m / (Q**m - 1.5) for m in range(24))
        assert np.allclose(predicted, expected, atol=1e-12)

    def test_x_branch_curve_samples_boundary(self):
        report = oc.spectral_mapping_check(log_xy_rep(), oc.model_pair(Q, 4))
        assert len(report.x_branch_curve) == 64
        z, v = report.x_branch_curve[0]
        assert z == pytest.approx(1.0)
        assert v == pytest.approx(LOG32)  # f(z, 0) is constant for this rep


class TestPairing:
    def test_shuffled_multiset_has_zero_distance(self, rng):
        vals = rng.standard_normal(20) + 1j * rng.standard_normal(20)
        shuffled = vals[rng.permutation(20)]
        perm, dist = oc.pair_eigenvalues(vals, shuffled)
        assert np.max(dist) == 0.0
        assert np.array_equal(np.sort(perm), np.arange(20))

    def test_greedy_branch_beyond_64(self, rng):
        vals = rng.standard_normal(80) + 1j * rng.standard_normal(80)
        perm, dist = oc.pair_eigenvalues(vals, vals)
        assert np.max(dist) == 0.0

    def test_size_mismatch(self):
        with pytest.raises(PreconditionError):
            oc.pair_eigenvalues([1.0], [1.0, 2.0])


class TestResolventTwist:
    def test_trivial_exponents_exact_zero(self):
        pair = oc.model_pair(Q, 8)
        assert oc.resolvent_twist_residual(pair, 0, 0, 3, 2.0) == 0.0

    def test_no_resolvent_reduces_to_reordering(self):
        pair = oc.model_pair(Q, 8)
        for i in range(3):
            for k in range(3):
                assert oc.resolvent_twist_residual(pair, i, k, 0, 2.0) <= 1e-14

    def test_derived_case(self):
        pair = oc.model_pair(Q, 16)
        res = oc.resolvent_twist_residual(pair, 2, 2, 2, 2.0, relative=True)
        assert res <= 1e-10

    def test_grid_of_exponents(self):
        pair = oc.model_pair(Q, 12)
        for lam in (2.0, -1.5, 3.0j):
            for i in range(3):
                for k in range(3):
                    for m in range(3):
                        assert (
                            oc.resolvent_twist_residual(pair, i, k, m, lam, relative=True)
                            <= 1e-10
                        )

    def test_singular_resolvent_rejected(self):
        pair = oc.model_pair(Q, 4)
        with pytest.raises(PreconditionError, match="singular"):
            oc.resolvent_twist_residual(pair, 1, 1, 1, 0.0)


class TestRadicalDecay:
    def test_mixed_monomial_sits_on_envelope(self):
        # f = x y: f_1(x) = x
        rep = oc.QFunctionRep(
            Q, (HoloSeries.zero(4), HoloSeries.monomial(4, 1)), 2.0, 2.0
        )
        rows = oc.radical_decay_check(rep, oc.model_pair(Q, 16), 8)
        for row in rows:
            assert row.ratio == pytest.approx(1.0, rel=1e-10)

    def test_zero_function(self):
        rep = oc.QFunctionRep(Q, (HoloSeries.zero(3),), 1.0, 2.0)
        rows = oc.radical_decay_check(rep, oc.model_pair(Q, 8), 4)
        assert all(row.root_norm == 0.0 for row in rows)

    def test_quadratic_coefficient_bounded_envelope(self):
        # f_1(x) = x^2 decays strictly faster than the envelope
        rep = oc.QFunctionRep(
            Q, (HoloSeries.zero(6), HoloSeries.monomial(6, 2)), 2.0, 2.0
        )
        rows = oc.radical_decay_check(rep, oc.model_pair(Q, 24), 10)
        ratios = [row.ratio for row in rows]
        assert all(r <= 1.0 + 1e-12 for r in ratios)
        assert all(b <= a + 1e-12 for a, b in zip(ratios, ratios[1:]))

    def test_rejects_unvanishing_coefficients(self):
        rep = oc.QFunctionRep(Q, (HoloSeries.one(3),), 2.0, 2.0)
        with pytest.raises(PreconditionError, match="f_0"):
            oc.radical_decay_check(rep, oc.model_pair(Q, 4), 3)
        rep = oc.QFunctionRep(
            Q, (HoloSeries.zero(3), HoloSeries.one(3)), 2.0, 2.0
        )
        with pytest.raises(PreconditionError, match="f_n"):
            oc.radical_decay_check(rep, oc.model_pair(Q, 4), 3)
