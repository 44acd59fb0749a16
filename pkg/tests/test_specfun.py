import math
import unittest

import numpy as np
from hypothesis import given, settings, strategies as st
from scipy import special

from fracosc.exceptions import PoleError, DomainError, AccuracyError
from fracosc.specfun import (
    gamma, log_gamma, rgamma, gamma_ratio, gen_binomial, is_pole,
    MLParams, mittag_leffler
)
from tests.abstract_tests import AFracOscTest


class TestGamma(AFracOscTest):

    def test_known_values(self):
        assert gamma(5) == 24.0
        assert gamma(1) == 1.0
        assert abs(gamma(0.5) - math.sqrt(math.pi)) < 1e-14
        assert abs(gamma(-0.5) + 2.0 * math.sqrt(math.pi)) < 1e-13

    def test_poles(self):
        for pole in (0, -1, -7):
            with self.assertRaises(PoleError):
                gamma(pole)
        assert is_pole(-3.0)
        assert not is_pole(-2.5)

    def test_reciprocal_at_pole(self):
        assert rgamma(-2) == 0.0
        assert abs(rgamma(3) - 0.5) < 1e-15

    def test_ratio_reads_pole_denominator_as_zero(self):
        assert gamma_ratio(2.5, -1) == 0.0
        with self.assertRaises(PoleError):
            gamma_ratio(0, 1.5)

    def test_large_ratio_through_logs(self):
        assert abs(gamma_ratio(150.5, 150.0) / math.exp(special.gammaln(150.5) - special.gammaln(150.0)) - 1) < 1e-10

    def test_vectorized(self):
        x = np.array([0.3, 1.7, 4.2])
        assert np.allclose(gamma(x), special.gamma(x), rtol=1e-13)

    def test_log_gamma_rejects_non_positive(self):
        with self.assertRaises(DomainError):
            log_gamma(-1.5)

    @given(st.floats(min_value=0.05, max_value=40.0))
    @settings(max_examples=200, deadline=None)
    def test_against_scipy(self, x):
        assert abs(gamma(x) / special.gamma(x) - 1.0) < 1e-12

    @given(st.floats(min_value=0.05, max_value=20.0))
    @settings(max_examples=100, deadline=None)
    def test_recurrence(self, x):
        assert abs(gamma(x + 1) / (x * gamma(x)) - 1.0) < 1e-12


class TestBinomial(unittest.TestCase):

    def test_integer_order(self):
        assert gen_binomial(5, 2) == 10.0
        assert gen_binomial(2, 3) == 0.0

    def test_fractional_order(self):
        assert abs(gen_binomial(0.5, 2) + 0.125) < 1e-15
        assert abs(gen_binomial(0.5, 3) - special.binom(0.5, 3)) < 1e-15

    def test_negative_index(self):
        with self.assertRaises(DomainError):
            gen_binomial(0.5, -1)


class TestMittagLeffler(AFracOscTest):

    def test_exponential_at_order_one(self):
        for z in (-3.0, 0.0, 0.5, 4.0):
            assert abs(mittag_leffler(1.0, z) - math.exp(z)) < 1e-13 * max(1.0, math.exp(z))

    def test_half_order_closed_form(self):
        # E_1/2(-z) = exp(z^2) erfc(z)
        for z in (0.1, 0.7, 2.0):
            assert abs(mittag_leffler(0.5, -z) - special.erfcx(z)) < 1e-12

    def test_beta_parameter(self):
        # E_{1,2}(z) = (exp(z) - 1) / z
        assert abs(mittag_leffler(1.0, 1.5, beta=2.0) - (math.exp(1.5) - 1) / 1.5) < 1e-13

    def test_vectorized(self):
        z = np.linspace(-1.0, 1.0, 5)
        assert np.allclose(mittag_leffler(1.0, z), np.exp(z), rtol=1e-13)

    def test_truncation_budget(self):
        with self.assertRaises(AccuracyError):
            mittag_leffler(0.5, 20.0, MLParams(0.5, truncation=3))

    def test_parameter_domain(self):
        with self.assertRaises(DomainError):
            MLParams(1.5)
        with self.assertRaises(DomainError):
            mittag_leffler(0.0, 1.0)

    def test_configured_truncation(self):
        assert MLParams.from_config(0.4).truncation == 1000


if __name__ == "__main__":
    unittest.main()
