import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from fracosc.exceptions import DomainError, RankError, SingularityError, ConfigError
from fracosc.expr import Polynomial
from fracosc.geometry import ChartMap
from fracosc.oscbundle import (
    JetPoint, FracSpray, DualCoefficients, PrimalCoefficients, MetricField,
    dual_ladder, riemann_ladder, spray_to_dual, primal_to_dual, dual_to_primal,
    adapted_basis, dual_basis, pairing_residual, metrical_connection,
    covariant_derivative_d_tensor, metricity_residual, sasaki_lift, zero_primal,
    ladder_derivation, jet_transform
)
from fracosc.specfun import gamma
from tests.abstract_tests import AFracOscTest


def sample_primal(alpha=0.5):
    return PrimalCoefficients(2, 2, alpha, (
        (("x1*y1_1", "0.5"), ("y2_1^2", "x2")),
        (("y1_2", "x1*x2"), ("1", "y2_1*y1_1")),
    ))


CHART_SCALES = (2.0, 0.5)


def scale_of(name, alpha):
    """ Factor by which a coordinate grows under x_i -> c_i x_i """
    if name.startswith("x"):
        return CHART_SCALES[int(name[1:]) - 1]
    i, a = name[1:].split("_")
    return CHART_SCALES[int(i) - 1] ** (alpha ** int(a))


def term_sum(terms, weight=1.0, pullback_alpha=None):
    total = Polynomial()
    for coefficient, powers in terms:
        term = Polynomial.constant(coefficient * weight)
        for name, exponent in powers.items():
            term = term * Polynomial.variable(name, exponent)
            if pullback_alpha is not None:
                term = term * scale_of(name, pullback_alpha) ** -exponent
        total = total + term
    return total


class TestCoefficients(AFracOscTest):

    def test_validation(self):
        with self.assertRaises(DomainError):
            DualCoefficients(1, 2, 0.5, ((("1",),),))
        with self.assertRaises(DomainError):
            DualCoefficients(2, 1, 0.5, ((("1",),),))

    def test_values_and_json(self):
        d = DualCoefficients(1, 1, 0.5, ((("2*x1",),),))
        p = JetPoint([3.0], [[1.0]])
        assert d.at(p).shape == (1, 1, 1)
        assert d.at(p)[0, 0, 0] == 6.0
        assert d.to_json()["orders"] == [[["2*x1"]]]

    def test_zero(self):
        assert pairing_residual(primal_to_dual(zero_primal(2, 3, 0.5)), JetPoint.random(self.rng(), 2, 3)) == 0.0


class TestDualRelation(AFracOscTest):

    def test_second_order_pairing(self):
        p = sample_primal()
        d = primal_to_dual(p)
        point = JetPoint.random(self.rng(), 2, 2)
        N = p.at(point)
        M = d.at(point)
        assert np.allclose(M[0], N[0])
        assert np.allclose(M[1], N[1] + N[0] @ N[0])

    def test_roundtrip(self):
        p = sample_primal()
        assert dual_to_primal(primal_to_dual(p)).max_difference(p) < 1e-12

    def test_roundtrip_literal(self):
        self.set_convention("dual_relation", "literal")
        p = sample_primal()
        assert dual_to_primal(primal_to_dual(p)).max_difference(p) < 1e-12

    def test_pairing(self):
        d = primal_to_dual(sample_primal())
        for seed in range(3):
            assert pairing_residual(d, JetPoint.random(self.rng(seed), 2, 2)) < 1e-12

    def test_third_order_pairing(self):
        d = DualCoefficients(1, 3, 0.5, ((("x1",),), (("y1_1",),), (("y1_2*x1",),)))
        assert pairing_residual(d, JetPoint.random(self.rng(2), 1, 3)) < 1e-12

    def test_bases_are_unitriangular(self):
        p = sample_primal()
        point = JetPoint.random(self.rng(1), 2, 2)
        A = adapted_basis(p, point)
        B = dual_basis(primal_to_dual(p), point)
        assert np.allclose(np.diag(A), 1.0) and np.allclose(np.triu(A, 1), 0.0)
        assert np.allclose(np.diag(B), 1.0) and np.allclose(np.triu(B, 1), 0.0)

    def test_adapted_basis_under_diagonal_scaling(self):
        # d_(a,i) = lambda_(a,i) dbar_(a,i) with lambda_(a,i) = c_i^(alpha^(a+1)); exact at k=1 and at alpha=1
        orders = (
            (([(1.0, {"x1": 1.0, "y2_1": 1.0})], [(0.5, {"x2": 1.5})]),
             ([(2.0, {"y1_1": 2.0})], [(0.3, {})])),
            (([(1.0, {"y1_2": 1.0})], [(0.2, {"x1": 1.0, "x2": 1.0})]),
             ([(0.7, {})], [(1.0, {"y2_1": 1.0, "y2_2": 1.0})])),
        )
        for alpha, k in ((0.6, 1), (1.0, 2)):
            def weight(a, i):
                return CHART_SCALES[i] ** (alpha ** (a + 1))

            p = PrimalCoefficients(2, k, alpha, tuple(
                tuple(tuple(term_sum(entry) for entry in row) for row in order) for order in orders[:k]))
            transformed = PrimalCoefficients(2, k, alpha, tuple(
                tuple(tuple(term_sum(entry, weight(m + 1, j) / weight(0, i), alpha) for i, entry in enumerate(row))
                      for j, row in enumerate(order))
                for m, order in enumerate(orders[:k])))
            scaling = np.diag([weight(a, i) for a in range(k + 1) for i in range(2)])
            chart_map = ChartMap.from_text(["2*x1", "0.5*x2"], ["0.5*x1", "2*x2"], alpha)
            for seed in range(5):
                point = JetPoint.random(self.rng(seed), 2, k, 0.3, 1.5)
                image = jet_transform(point, chart_map)
                residual = scaling @ adapted_basis(p, point) - adapted_basis(transformed, image) @ scaling
                assert np.max(np.abs(residual)) < 1e-10

    def test_unknown_relation(self):
        self.set_convention("dual_relation", "transposed")
        with self.assertRaises(ConfigError):
            primal_to_dual(sample_primal())


class TestLadder(AFracOscTest):

    def test_second_order(self):
        alpha = 0.5
        first = ((Polynomial.from_expr("2*y1_1"),),)
        d = riemann_ladder(first, alpha, 1, 2)
        expected = (Polynomial.from_expr("y1_2*y1_1^0.5") * (2.0 / gamma(1.5))
                    + Polynomial.from_expr("y1_1^2") * (4.0 * gamma(0.5) / gamma(1.0)))
        assert d.order(2)[0][0].max_abs_difference(expected) < 1e-13

    def test_flat(self):
        first = ((Polynomial(), Polynomial()), (Polynomial(), Polynomial()))
        d = riemann_ladder(first, 0.5, 2, 3)
        assert all(entry.is_zero() for m in d.orders for row in m for entry in row)

    def test_explicit_derivation(self):
        first = ((Polynomial.from_expr("x1"),),)
        d = dual_ladder(first, lambda f: ladder_derivation(f, 0.5, 1, 2), 0.5, 1, 2)
        assert d.k == 2
        assert d.order(1)[0][0] == Polynomial.from_expr("x1")

    def test_spray_to_dual_first_order(self):
        alpha = 0.5
        s = FracSpray(1, 1, alpha, ("x1*y1_1^2",))
        d = spray_to_dual(s)
        expected = Polynomial.from_expr("x1*y1_1^1.5") * (gamma(3.0) / gamma(2.5))
        assert d.order(1)[0][0].max_abs_difference(expected) < 1e-14

    def test_spray_and_ladder_routes_agree_below_top_order(self):
        alpha = 0.7
        s = FracSpray(1, 3, alpha, ("x1^-0.7*y1_1^1.7",))
        first = ((s.G[0].frac_partial("y1_1", alpha),),)
        assert spray_to_dual(s).max_difference(riemann_ladder(first, alpha, 1, 3)) < 1e-12


class TestMetric(AFracOscTest):

    def test_symmetry_required(self):
        with self.assertRaises(DomainError):
            MetricField(2, 1, (("1", "x1"), ("0", "1")))

    def test_singular(self):
        g = MetricField(2, 1, (("1", "0"), ("0", "0")))
        with self.assertRaises(RankError):
            g.inverse_at(JetPoint([1.0, 1.0], [[1.0, 1.0]]))

    def test_flat_connection_vanishes(self):
        g = MetricField(2, 2, (("1", "0"), ("0", "1")))
        point = JetPoint.random(self.rng(), 2, 2)
        conn = metrical_connection(g, zero_primal(2, 2, 0.5), point)
        assert not np.any(conn.L) and not np.any(conn.C)

    def test_one_dimensional_value(self):
        alpha = 0.5
        g = MetricField(1, 1, (("x1^2",),))
        point = JetPoint([2.0], [[1.0]])
        conn = metrical_connection(g, zero_primal(1, 1, alpha), point)
        # 1/2 g^-1 D_x g
        expected = 0.5 / 4.0 * gamma(3.0) / gamma(2.5) * 2.0 ** 1.5
        assert abs(conn.L[0, 0, 0] - expected) < 1e-14
        assert conn.C[0, 0, 0, 0] == 0.0

    def test_metricity(self):
        metrics = (
            MetricField(2, 2, (("x1^2 + y1_1", "0.5*x2"), ("0.5*x2", "3 + x2^1.5*y2_1"))),
            MetricField(2, 2, (("1 + y1_2^2", "0"), ("0", "x1*x2"))),
            MetricField(2, 2, (("2", "y2_1"), ("y2_1", "2 + x1*y1_2"))),
        )
        p = sample_primal()
        for g in metrics:
            for seed in range(50):
                point = JetPoint.random(self.rng(seed), 2, 2, 0.5, 1.5)
                conn = metrical_connection(g, p, point)
                assert conn.horizontal_symmetry_residual() < 1e-12
                assert conn.vertical_symmetry_residual() < 1e-12
                assert metricity_residual(g, p, point) < 1e-10

    def test_metricity_with_mixed_entries(self):
        g = MetricField(2, 2, (("x1^2 + y1_1", "x2*y1_2"), ("x2*y1_2", "3 + x2^1.5*y2_1")))
        p = sample_primal()
        for seed in range(3):
            point = JetPoint.random(self.rng(seed), 2, 2, 0.5, 1.5)
            assert metricity_residual(g, p, point) < 1e-10

    def test_covariant_derivative_of_scalar(self):
        g = MetricField(1, 1, (("1",),))
        p = zero_primal(1, 1, 0.5)
        point = JetPoint([4.0], [[1.0]])
        conn = metrical_connection(g, p, point)
        horizontal, vertical = covariant_derivative_d_tensor(Polynomial.from_expr("x1"), conn, p, point)
        assert abs(horizontal[0] - gamma(2.0) / gamma(1.5) * 2.0) < 1e-14
        assert vertical[0, 0] == 0.0

    def test_bundle_mismatch(self):
        g = MetricField(1, 2, (("1",),))
        with self.assertRaises(DomainError):
            metrical_connection(g, zero_primal(1, 1, 0.5), JetPoint([1.0], [[1.0]]))


class TestSasaki(AFracOscTest):

    def test_positive_definite_lift(self):
        g = MetricField(2, 2, (("2", "0.5"), ("0.5", "1 + x1^2")))
        d = primal_to_dual(sample_primal())
        point = JetPoint.random(self.rng(), 2, 2)
        lifted = sasaki_lift(g, d, point)
        assert lifted.shape == (6, 6)
        assert np.allclose(lifted, lifted.T)
        assert np.all(np.linalg.eigvalsh(lifted) > 0)

    def test_block_diagonal_without_connection(self):
        g = MetricField(1, 2, (("3",),))
        d = primal_to_dual(zero_primal(1, 2, 0.5))
        assert np.allclose(sasaki_lift(g, d, JetPoint([1.0], [[1.0], [1.0]])), 3.0 * np.eye(3))

    @given(st.floats(min_value=-5.0, max_value=5.0), st.floats(min_value=0.1, max_value=1.0))
    @settings(max_examples=50, deadline=None)
    def test_one_dimensional_lift(self, m, alpha):
        g = MetricField(1, 1, (("1",),))
        d = DualCoefficients(1, 1, alpha, (((Polynomial.constant(m),),),))
        lifted = sasaki_lift(g, d, JetPoint([1.0], [[1.0]]))
        assert np.allclose(lifted, [[1.0 + m * m, m], [m, 1.0]], rtol=0.0, atol=1e-12)

    def test_indefinite_metric(self):
        g = MetricField(1, 1, (("-1",),))
        d = primal_to_dual(zero_primal(1, 1, 0.5))
        with self.assertRaises(SingularityError):
            sasaki_lift(g, d, JetPoint([1.0], [[1.0]]))


if __name__ == "__main__":
    unittest.main()
