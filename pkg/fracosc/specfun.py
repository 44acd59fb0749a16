"""
Special functions shared by every other module: Euler Gamma, generalized
binomial coefficients and the Mittag-Leffler function.

Gamma uses the Lanczos approximation (g=7, nine coefficients) on the right
half plane and the reflection formula below 1/2.
"""
import math
import logging
from dataclasses import dataclass

import numpy as np

from . import Config
from .exceptions import PoleError, DomainError, AccuracyError


LANCZOS_G = 7

LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# largest argument whose Gamma value fits a double
GAMMA_OVERFLOW = 171.6

_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)


def is_pole(x):
    """ True if ``x`` is one of 0, -1, -2, ... """
    return x <= 0 and float(x).is_integer()


def _lanczos_sum(x):
    # x is already shifted by one
    a = LANCZOS_COEFFICIENTS[0]
    for i in range(1, len(LANCZOS_COEFFICIENTS)):
        a += LANCZOS_COEFFICIENTS[i] / (x + i)
    return a


def _gamma_scalar(x):
    x = float(x)
    if is_pole(x):
        raise PoleError(x)
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * _gamma_scalar(1.0 - x))
    if x > GAMMA_OVERFLOW:
        raise DomainError("Gamma({0}) overflows double precision".format(x))
    if x.is_integer() and x <= 23:
        return float(math.factorial(int(x) - 1))
    x -= 1.0
    t = x + LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (x + 0.5) * math.exp(-t) * _lanczos_sum(x)


def gamma(x):
    """
    Euler Gamma function.

    :param x: argument, scalar or array; must avoid 0, -1, -2, ...
    :type x: float or numpy.ndarray
    :return: Gamma(x), same shape as the input
    :raises PoleError: at a non-positive integer
    """
    if np.ndim(x) > 0:
        return np.vectorize(_gamma_scalar, otypes=[float])(x)
    return _gamma_scalar(x)


def log_gamma(x):
    """ Logarithm of |Gamma(x)| for x > 0 """
    x = float(x)
    if x <= 0:
        raise DomainError("log_gamma is only provided for positive arguments, got {0}".format(x))
    if x < 0.5:
        return math.log(math.pi / abs(math.sin(math.pi * x))) - log_gamma(1.0 - x)
    x -= 1.0
    t = x + LANCZOS_G + 0.5
    return _HALF_LOG_TWO_PI + (x + 0.5) * math.log(t) - t + math.log(_lanczos_sum(x))


def rgamma(x):
    """ Reciprocal Gamma, 0 at the poles """
    if np.ndim(x) > 0:
        return np.vectorize(rgamma, otypes=[float])(x)
    if is_pole(x):
        return 0.0
    if x > GAMMA_OVERFLOW:
        return math.exp(-log_gamma(x))
    return 1.0 / _gamma_scalar(x)


def gamma_ratio(a, b):
    """
    Gamma(a) / Gamma(b), with 1/Gamma(pole) read as 0.

    :raises PoleError: if ``a`` is a pole
    """
    if is_pole(a):
        raise PoleError(a)
    if is_pole(b):
        return 0.0
    if a > 0 and b > 0 and max(a, b) > 100.0:
        return math.exp(log_gamma(a) - log_gamma(b))
    return _gamma_scalar(a) * rgamma(b)


def gen_binomial(alpha, k):
    """
    Generalized binomial coefficient (alpha choose k) through the recursion
    w_0 = 1, w_k = w_{k-1} * (alpha - k + 1) / k.
    """
    if k < 0:
        raise DomainError("binomial index must be non-negative, got {0}".format(k))
    w = 1.0
    for j in range(1, int(k) + 1):
        w = w * (alpha - j + 1) / j
    return w


@dataclass(frozen=True)
class MLParams:
    """
    Truncation settings of the Mittag-Leffler series.

    :param alpha: order in (0, 1]
    :param truncation: maximal number of series terms
    :param tolerance: magnitude below which the first omitted term must fall
    """
    alpha: float
    truncation: int = 1000
    tolerance: float = 1e-17

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise DomainError("Mittag-Leffler order must lie in (0, 1], got {0}".format(self.alpha))
        if self.truncation < 1:
            raise DomainError("truncation must be at least one term")
        if not self.tolerance > 0:
            raise DomainError("tolerance must be positive")

    @classmethod
    def from_config(cls, alpha):
        return cls(
            alpha=alpha,
            truncation=int(Config.get("numerics", "mittag_leffler", "truncation", 1000)),
            tolerance=float(Config.get("numerics", "mittag_leffler", "tolerance", 1e-17))
        )


def _mittag_leffler_scalar(z, params, beta):
    z = float(z)
    if z == 0.0:
        return 1.0 / gamma(beta)

    log_abs_z = math.log(abs(z))
    negative = z < 0
    terms = []
    previous = math.inf
    magnitude = math.inf
    for m in range(params.truncation):
        log_magnitude = m * log_abs_z - log_gamma(params.alpha * m + beta)
        magnitude = math.exp(log_magnitude) if log_magnitude > -745 else 0.0
        if magnitude < params.tolerance and magnitude <= previous:
            break
        terms.append(-magnitude if (negative and m % 2) else magnitude)
        previous = magnitude
    else:
        raise AccuracyError(
            "Mittag-Leffler series for alpha={0}, z={1} did not converge within {2} terms".format(
                params.alpha, z, params.truncation),
            magnitude=magnitude
        )

    value = math.fsum(terms)
    largest = max(abs(t) for t in terms)
    if value != 0 and largest / abs(value) > Config.get(
            "numerics", "mittag_leffler", "cancellation_warning", 1e8):
        logging.getLogger(__name__).warning(
            "Mittag-Leffler E_{0}({1}) lost about {2:.0f} digits to cancellation".format(
                params.alpha, z, math.log10(largest / abs(value)))
        )
    return value


def mittag_leffler(alpha, z, params=None, beta=1.0):
    """
    Mittag-Leffler function E_{alpha,beta}(z) = sum_m z^m / Gamma(alpha m + beta)
    by direct summation.

    The series is summed until the terms have passed their peak and dropped
    below ``params.tolerance``. Terms are formed in log space, so arguments up
    to |z| ~ 30 work for alpha >= 0.3; beyond that cancellation for negative z
    costs accuracy and a warning is logged.

    :param alpha: order in (0, 1]
    :param z: real argument, scalar or array
    :param params: truncation settings, defaults from the configuration
    :type params: MLParams
    :param beta: second parameter, 1 for the classical function
    :raises AccuracyError: when the truncation budget is exhausted
    """
    if params is None:
        params = MLParams.from_config(alpha)
    elif params.alpha != alpha:
        params = MLParams(alpha, params.truncation, params.tolerance)
    if np.ndim(z) > 0:
        return np.vectorize(
            lambda v: _mittag_leffler_scalar(v, params, beta), otypes=[float]
        )(z)
    return _mittag_leffler_scalar(z, params, beta)
