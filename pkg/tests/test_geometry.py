import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from fracosc.exceptions import SingularityError, RankError, UnsupportedFormError, DomainError
from fracosc.expr import parse
from fracosc.geometry import (
    Chart, ChartMap, Direction, Basis, FracOneForm, classical_jacobian, frac_jacobian,
    jacobian_identity_residual, frac_jacobian_power_rule, jacobian_form_discrepancy,
    transform_vector, exterior_d0, exterior_d1
)
from fracosc.specfun import gamma, mittag_leffler
from tests.abstract_tests import AFracOscTest


class TestChart(unittest.TestCase):

    def test_interior(self):
        chart = Chart(2, 0.0, 5.0)
        assert chart.names == ("x1", "x2")
        assert np.allclose(chart.check_interior([1.0, 2.0]), [1.0, 2.0])
        with self.assertRaises(SingularityError):
            chart.check_interior([0.0, 1.0])
        with self.assertRaises(SingularityError):
            chart.check_interior([1.0, 6.0])
        with self.assertRaises(DomainError):
            chart.check_interior([1.0])

    def test_empty_box(self):
        with self.assertRaises(DomainError):
            Chart(1, 2.0, 1.0)


class TestFracJacobian(AFracOscTest):

    def setUp(self):
        super().setUp()
        self.scaling = ChartMap.from_text(["3*x1", "2*x2"], ["x1/3", "x2/2"], 0.4)
        self.squares = ChartMap.from_text(["x1^2", "x1*x2"], ["x1^0.5", "x2*x1^-0.5"], 0.6)

    def test_roundtrip(self):
        points = self.rng().uniform(0.1, 2.0, size=(10, 2))
        assert self.squares.roundtrip_residual(points) < 1e-13
        assert np.allclose(self.squares.inverted().apply([4.0, 2.0]), [2.0, 1.0])

    def test_scaling(self):
        forward = frac_jacobian(self.scaling, [0.5, 1.5])
        assert np.allclose(forward, np.diag([3.0 ** 0.4, 2.0 ** 0.4]), rtol=1e-14)

    def test_inverse_relation(self):
        for point in self.rng(1).uniform(0.2, 3.0, size=(5, 2)):
            assert jacobian_identity_residual(self.squares, point) < 1e-12

    @given(st.floats(min_value=0.1, max_value=0.95), st.floats(min_value=0.2, max_value=3.0),
           st.floats(min_value=0.2, max_value=3.0))
    @settings(max_examples=30, deadline=None)
    def test_jacobian_product_is_identity(self, alpha, x1, x2):
        squares = ChartMap.from_text(["x1^2", "x1*x2"], ["x1^0.5", "x2*x1^-0.5"], alpha)
        assert jacobian_identity_residual(squares, [x1, x2]) < 1e-10

    @given(st.floats(min_value=0.1, max_value=1.0), st.floats(min_value=0.5, max_value=2.0),
           st.floats(min_value=0.5, max_value=2.0), st.floats(min_value=0.5, max_value=2.0),
           st.floats(min_value=-1.0, max_value=1.0), st.floats(min_value=0.5, max_value=2.0),
           st.floats(min_value=0.5, max_value=2.0), st.floats(min_value=0.5, max_value=2.0))
    @settings(max_examples=100, deadline=None)
    def test_jacobian_product_for_triangular_monomial_maps(self, alpha, c1, c2, p, q, r, x1, x2):
        forward = ["{0!r}*x1^{1!r}".format(c1, p), "{0!r}*x1^{1!r}*x2^{2!r}".format(c2, q, r)]
        inverse = [
            "{0!r}*x1^{1!r}".format(c1 ** (-1.0 / p), 1.0 / p),
            "{0!r}*x1^{1!r}*x2^{2!r}".format(c2 ** (-1.0 / r) * c1 ** (q / (p * r)), -q / (p * r), 1.0 / r),
        ]
        m = ChartMap.from_text(forward, inverse, alpha)
        assert jacobian_identity_residual(m, [x1, x2]) < 1e-10

    def test_identity_map(self):
        identity = ChartMap.identity(3, 0.5)
        assert np.allclose(frac_jacobian(identity, [0.3, 1.0, 2.0], Direction.Inverse), np.eye(3))

    def test_singular_points(self):
        with self.assertRaises(SingularityError):
            frac_jacobian(self.squares, [0.0, 1.0])
        shifted = ChartMap.from_text(["x1 - 1"], ["x1 + 1"], 0.5)
        with self.assertRaises(SingularityError):
            frac_jacobian(shifted, [0.5])

    def test_rank_deficient(self):
        degenerate = ChartMap.from_text(["x1 + x2", "2*x1 + 2*x2"], ["x1", "x2"], 0.5)
        with self.assertRaises(RankError):
            frac_jacobian(degenerate, [1.0, 1.0])

    def test_power_rule_form_agrees_on_scalings(self):
        assert jacobian_form_discrepancy(self.scaling, [0.7, 1.1]) < 1e-14

    def test_power_rule_form_at_order_one(self):
        m = ChartMap.from_text(["x1^2"], ["x1^0.5"], 1.0)
        assert jacobian_form_discrepancy(m, [1.3]) < 1e-14

    def test_power_rule_form_differs_on_curved_maps(self):
        m = ChartMap.from_text(["x1^2"], ["x1^0.5"], 0.5)
        expected = gamma(1.25) / (gamma(0.75) * gamma(1.5)) * 4.0 ** -0.25
        assert abs(frac_jacobian_power_rule(m, [2.0])[0, 0] - expected) < 1e-14
        assert jacobian_form_discrepancy(m, [2.0]) > 0.1

    def test_power_rule_needs_single_terms(self):
        m = ChartMap.from_text(["x1"], ["x1 + 0"], 0.5)
        assert abs(frac_jacobian_power_rule(m, [1.0])[0, 0] - 1.0) < 1e-14
        m = ChartMap.from_text(["x1^2 - 1"], ["(x1 + 1)^0.5"], 0.5)
        with self.assertRaises(UnsupportedFormError):
            frac_jacobian_power_rule(m, [2.0])

    def test_central_differences_outside_fragment(self):
        jacobian = classical_jacobian([parse("gamma(x1)")], [2.0])
        assert abs(jacobian[0, 0] - 0.42278433509846713) < 1e-6

    def test_vector_transform(self):
        transformed = transform_vector(self.scaling, [1.0, 1.0], [1.0, -2.0])
        assert np.allclose(transformed, [3.0 ** 0.4, -2.0 * 2.0 ** 0.4])


class TestExteriorDerivative(AFracOscTest):

    def test_d0_power_rule(self):
        form = exterior_d0("x1^2*x2", 0.5, 2)
        values = form.at([1.0, 4.0])
        assert abs(values[0] - gamma(3) / gamma(2.5) * 4.0) < 1e-13
        assert abs(values[1] - gamma(2) / gamma(1.5) * 2.0) < 1e-13

    def test_d_squared_vanishes(self):
        form = exterior_d0("x1^2.5*x2^1.5 + 3*x1*x2^2", 0.7, 2)
        assert exterior_d1(form, 0.7).max_coefficient() < 1e-12

    @given(st.floats(min_value=0.5, max_value=3.0), st.floats(min_value=0.5, max_value=4.0),
           st.floats(min_value=0.5, max_value=4.0), st.floats(min_value=0.0, max_value=3.0),
           st.floats(min_value=0.05, max_value=1.0))
    @settings(max_examples=100, deadline=None)
    def test_d_squared_vanishes_on_monomials(self, c, a, b, e, alpha):
        f = "{0!r}*x1^{1!r}*x2^{2!r}*x3^{3!r}".format(c, a, b, e)
        assert exterior_d1(exterior_d0(f, alpha, 3), alpha).max_coefficient() < 1e-12

    def test_d1_classical_basis(self):
        w = FracOneForm(("x2", "0"), Basis.Classical)
        two_form = exterior_d1(w, 1.0)
        values = two_form.at([1.0, 2.0])
        assert values[0, 1] == -1.0
        assert values[1, 0] == 1.0
        assert values[0, 0] == 0.0

    def test_d1_fractional_basis(self):
        w = FracOneForm(("x2", "0"))
        two_form = exterior_d1(w, 0.5)
        assert abs(two_form.coefficient(1, 2).evaluate({"x2": 4.0}) + 2.0 / gamma(1.5)) < 1e-14

    def test_basis_conversion(self):
        w = FracOneForm(("x1",), Basis.Classical).to_fractional_basis(0.5)
        assert abs(w.at([4.0])[0] - 4.0 * 2.0 / 0.5) < 1e-14

    def test_numeric_fallback(self):
        with self.assertRaises(UnsupportedFormError):
            exterior_d0("ml(1, x1)", 0.5, 1)
        form = exterior_d0("ml(1, x1)", 0.5, 1, at=[1.0])
        expected = mittag_leffler(1.0, 1.0, beta=1.5)
        assert abs(form.at([1.0])[0] - expected) < 1e-2

    def test_d1_rejects_jet_variables(self):
        with self.assertRaises(DomainError):
            exterior_d1(FracOneForm(("y1_1",)), 0.5)


if __name__ == "__main__":
    unittest.main()
