import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from fracosc.exceptions import DomainError, SolverError, UnknownIdentifierError
from fracosc.fracnum import (
    Side, SampledFunction, gl_weights, gl_derivative, l1_derivative, trapezoid,
    integration_by_parts_residual, convergence_order, FodeProblem, solve_fode,
    residual_nodes, spray_ode_residual
)
from fracosc.fracseries import FracSeries
from fracosc.oscbundle import FracSpray
from fracosc.specfun import gamma, gen_binomial, mittag_leffler
from tests.abstract_tests import AFracOscTest


def square_error(scheme, alpha, h):
    f = SampledFunction.from_function(lambda t: t ** 2, 0.0, 1.0, h)
    exact = 2.0 / gamma(3.0 - alpha) * f.grid ** (2.0 - alpha)
    return float(np.max(np.abs(scheme(f, alpha).values - exact)))


class TestSampledFunction(unittest.TestCase):

    def test_grid(self):
        f = SampledFunction.from_function(np.sin, 0.5, 1.5, 0.25)
        assert len(f.values) == 5
        assert np.allclose(f.grid, [0.5, 0.75, 1.0, 1.25, 1.5])
        assert abs(f.b - 1.5) < 1e-15

    def test_invalid(self):
        with self.assertRaises(DomainError):
            SampledFunction(0.0, 0.1, [1.0])
        with self.assertRaises(DomainError):
            SampledFunction(0.0, 0.0, [1.0, 2.0])


class TestGrunwaldLetnikov(AFracOscTest):

    @given(st.floats(min_value=0.05, max_value=0.95))
    @settings(max_examples=50, deadline=None)
    def test_weights_are_signed_binomials(self, alpha):
        weights = gl_weights(alpha, 6)
        expected = [(-1) ** k * gen_binomial(alpha, k) for k in range(6)]
        assert np.allclose(weights, expected, rtol=1e-12, atol=1e-15)

    def test_constants_vanish(self):
        f = SampledFunction(0.0, 0.01, np.full(101, 3.0))
        assert np.all(gl_derivative(f, 0.4).values == 0.0)
        assert np.all(l1_derivative(f, 0.4, Side.Right).values == 0.0)

    def test_square(self):
        assert square_error(gl_derivative, 0.5, 1e-3) < 1e-2

    def test_first_order(self):
        steps = [1.0 / 100, 1.0 / 200, 1.0 / 400]
        errors = [square_error(gl_derivative, 0.5, h) for h in steps]
        assert 0.8 < convergence_order(errors, steps) < 1.2

    def test_right_side(self):
        h = 1e-3
        f = SampledFunction.from_function(lambda t: (1.0 - t) ** 2, 0.0, 1.0, h)
        exact = 2.0 / gamma(2.5) * (1.0 - f.grid) ** 1.5
        assert np.max(np.abs(gl_derivative(f, 0.5, Side.Right).values - exact)) < 1e-2

    def test_order_range(self):
        f = SampledFunction(0.0, 0.1, np.arange(5.0))
        with self.assertRaises(DomainError):
            gl_derivative(f, 1.0)
        with self.assertRaises(DomainError):
            l1_derivative(f, 0.0)


class TestL1(AFracOscTest):

    def test_order_two_minus_alpha(self):
        steps = [1.0 / 100, 1.0 / 200, 1.0 / 400]
        errors = [square_error(l1_derivative, 0.5, h) for h in steps]
        assert 1.3 < convergence_order(errors, steps) < 1.7

    def test_linear_is_exact(self):
        f = SampledFunction.from_function(lambda t: 2.0 * t, 0.0, 1.0, 0.05)
        exact = 2.0 / gamma(1.5) * f.grid ** 0.5
        assert np.max(np.abs(l1_derivative(f, 0.5).values - exact)) < 1e-12


class TestIntegrationByParts(AFracOscTest):

    def test_vanishing_endpoints(self):
        h = 1e-3
        f1 = SampledFunction.from_function(lambda t: t * (1 - t), 0.0, 1.0, h)
        f2 = SampledFunction.from_function(lambda t: t ** 2 * (1 - t), 0.0, 1.0, h)
        assert integration_by_parts_residual(f1, f2, 0.5) < 5e-3

    def test_residual_shrinks_under_refinement(self):
        def residual(alpha, h):
            f1 = SampledFunction.from_function(lambda t: t * (1 - t), 0.0, 1.0, h)
            f2 = SampledFunction.from_function(lambda t: t ** 2 * (1 - t), 0.0, 1.0, h)
            return integration_by_parts_residual(f1, f2, alpha)

        steps = [1.0 / 100, 1.0 / 200, 1.0 / 400, 1.0 / 800]
        residuals = [residual(0.5, h) for h in steps]
        # halving h gains at least a factor 1.5 = 2^0.585
        assert convergence_order(residuals, steps) > 0.585
        assert residual(0.3, 5e-4) < residual(0.3, 1e-3)

    def test_grids_must_match(self):
        f1 = SampledFunction(0.0, 0.1, np.arange(5.0))
        f2 = SampledFunction(0.0, 0.2, np.arange(5.0))
        with self.assertRaises(DomainError):
            integration_by_parts_residual(f1, f2, 0.5)

    def test_trapezoid(self):
        assert abs(trapezoid(np.linspace(0.0, 1.0, 11) ** 2, 0.1) - 0.335) < 1e-14


class TestFodeSolver(AFracOscTest):

    def test_mittag_leffler_solution(self):
        trajectory = solve_fode(FodeProblem(0.5, ["x1"], [1.0], 1.0, 1e-3))
        assert trajectory.t[-1] == 1.0
        assert abs(trajectory.final[0] - mittag_leffler(0.5, 1.0)) < 1e-2

    def test_forced_linear_solution(self):
        alpha = 0.6
        rhs = "{0}*t^{1}".format(1.0 / gamma(2.0 - alpha), 1.0 - alpha)
        trajectory = solve_fode(FodeProblem(alpha, [rhs], [0.0], 1.0, 1e-3))
        assert np.max(np.abs(trajectory.x[:, 0] - trajectory.t)) < 2e-3

    def test_system(self):
        # D^alpha x1 = x2, D^alpha x2 = 0 with x2 = 1: x1 = t^alpha / Gamma(1 + alpha)
        alpha = 0.7
        trajectory = solve_fode(FodeProblem(alpha, ["x2", "0"], [0.0, 1.0], 1.0, 1e-2))
        assert np.allclose(trajectory.x[:, 1], 1.0)
        assert abs(trajectory.final[0] - 1.0 / gamma(1.0 + alpha)) < 1e-10

    def test_blow_up_reports_last_node(self):
        with self.assertRaises(SolverError) as context:
            solve_fode(FodeProblem(0.5, ["x1^2"], [1.0], 10.0, 1e-2))
        assert context.exception.node is not None
        assert context.exception.t < 10.0

    def test_failure_at_initial_state(self):
        with self.assertRaises(SolverError) as context:
            solve_fode(FodeProblem(0.5, ["x1^-1"], [0.0], 1.0, 0.1))
        assert context.exception.node == 0
        assert context.exception.t == 0.0
        assert context.exception.state == [0.0]

    def test_validation(self):
        with self.assertRaises(DomainError):
            FodeProblem(0.5, ["x1", "x1"], [1.0], 1.0, 0.1)
        with self.assertRaises(DomainError):
            FodeProblem(1.0, ["x1"], [1.0], 1.0, 0.1)
        with self.assertRaises(DomainError):
            FodeProblem(0.5, ["x1"], [1.0], 1.0, -0.1)
        with self.assertRaises(UnknownIdentifierError):
            FodeProblem(0.5, ["x2"], [1.0], 1.0, 0.1)


class TestSprayResidual(AFracOscTest):

    def test_configured_nodes(self):
        nodes = residual_nodes()
        assert len(nodes) == 17
        assert nodes[0] > 0.0 and nodes[-1] == 1.0

    def test_free_motion(self):
        spray = FracSpray(1, 1, 0.5, ("0",))
        curve = [FracSeries(((2.0, 0.0), (1.0, 0.5)))]
        assert spray_ode_residual(spray, curve) < 1e-14

    def test_curve_dimension(self):
        spray = FracSpray(1, 1, 0.5, ("0",))
        with self.assertRaises(DomainError):
            spray_ode_residual(spray, [FracSeries.monomial(1.0, 1.0)] * 2)


if __name__ == "__main__":
    unittest.main()
