"""
Exact calculus on fractional power series sum_m c_m (t - a)^gamma_m.

The class is closed under the modified Riemann-Liouville derivative, which
subtracts the value at the base point before differentiating, so constants
are annihilated and t^gamma maps to Gamma(1+gamma)/Gamma(1+gamma-alpha)
t^(gamma-alpha).
"""
import json
import logging
from dataclasses import dataclass

import numpy as np

from . import Config
from .exceptions import DomainError, UnsupportedFormError
from .specfun import gamma, gamma_ratio, gen_binomial


def exponent_tolerance():
    return float(Config.get("numerics", "exponent_tolerance", 1e-9))


def _check_order(alpha):
    if not 0 < alpha <= 1:
        raise DomainError("derivative order must lie in (0, 1], got {0}".format(alpha))


def _normalize(terms):
    tol = exponent_tolerance()
    merged = []
    for coefficient, exponent in sorted(terms, key=lambda term: term[1]):
        coefficient = float(coefficient)
        exponent = float(exponent)
        if abs(exponent) < tol:
            exponent = 0.0
        if exponent < 0:
            raise DomainError(
                "negative exponent {0} is outside the fractional power series class".format(exponent))
        if merged and exponent - merged[-1][1] < tol:
            merged[-1][0] += coefficient
        else:
            merged.append([coefficient, exponent])
    return tuple((c, e) for c, e in merged if c != 0.0)


@dataclass(frozen=True)
class FracSeries:
    """
    Finite sum of terms ``c * (t - base_point)**exponent``.

    Terms are kept sorted by exponent, exponents closer than the configured
    tolerance are merged and zero coefficients dropped.

    :param terms: pairs ``(coefficient, exponent)`` with exponent >= 0
    :param base_point: lower limit ``a`` of the derivative
    """
    terms: tuple = ()
    base_point: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "terms", _normalize(self.terms))
        object.__setattr__(self, "base_point", float(self.base_point))

    @classmethod
    def monomial(cls, coefficient, exponent, base_point=0.0):
        return cls(((coefficient, exponent),), base_point)

    @classmethod
    def constant(cls, value, base_point=0.0):
        return cls(((value, 0.0),), base_point)

    @classmethod
    def zero(cls, base_point=0.0):
        return cls((), base_point)

    @classmethod
    def from_json(cls, text, base_point=0.0):
        """ Reads a JSON array of ``[coefficient, exponent]`` pairs """
        try:
            pairs = json.loads(text) if isinstance(text, str) else text
            return cls(tuple((float(c), float(e)) for c, e in pairs), base_point)
        except (ValueError, TypeError) as e:
            raise DomainError("not a series description: {0}".format(e))

    @classmethod
    def from_expr(cls, e, base_point=0.0):
        """ Converts an expression in the single variable ``t`` """
        from .expr import Polynomial

        poly = e if isinstance(e, Polynomial) else Polynomial.from_expr(e)
        terms = []
        for monomial, coefficient in poly.terms.items():
            exponent = 0.0
            for name, power in monomial:
                if name != "t":
                    raise UnsupportedFormError(
                        "series expressions may only use the variable t, found {0}".format(name))
                exponent = power
            terms.append((coefficient, exponent))
        return cls(tuple(terms), base_point)

    def to_json(self):
        return json.dumps([[c, e] for c, e in self.terms])

    @property
    def exponents(self):
        return tuple(e for _, e in self.terms)

    def is_zero(self):
        return len(self.terms) == 0

    def coefficient(self, exponent):
        tol = exponent_tolerance()
        for c, e in self.terms:
            if abs(e - exponent) < tol:
                return c
        return 0.0

    def _check_compatible(self, other):
        if self.base_point != other.base_point:
            raise DomainError("series with different base points cannot be combined")

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = FracSeries.constant(other, self.base_point)
        self._check_compatible(other)
        return FracSeries(self.terms + other.terms, self.base_point)

    __radd__ = __add__

    def __neg__(self):
        return FracSeries(tuple((-c, e) for c, e in self.terms), self.base_point)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return FracSeries(tuple((c * other, e) for c, e in self.terms), self.base_point)
        self._check_compatible(other)
        return FracSeries(
            tuple((c1 * c2, e1 + e2) for c1, e1 in self.terms for c2, e2 in other.terms),
            self.base_point
        )

    __rmul__ = __mul__

    def max_coefficient_difference(self, other):
        """ Largest absolute coefficient of ``self - other`` """
        difference = self - other
        return max((abs(c) for c, _ in difference.terms), default=0.0)

    def __call__(self, t):
        return evaluate(self, t)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join("{0!r}*t^{1!r}".format(c, e) for c, e in self.terms)


def evaluate(f, t):
    """
    Value of the series at ``t >= base_point``, with 0^0 = 1.

    :param t: scalar or array of times
    """
    s = np.asarray(t, dtype=float) - f.base_point
    if np.any(s < 0):
        raise DomainError("series are only evaluated at t >= {0}".format(f.base_point))
    value = np.zeros_like(s)
    for c, e in f.terms:
        value = value + c * np.power(s, e)
    if np.ndim(t) == 0:
        return float(value)
    return value


def evaluate_mirrored(f, t, b):
    """
    Evaluates ``f`` read as a series in ``b - t``.

    The right-sided derivative of g(t) = f(b - t) is frac_derive(f) evaluated
    the same way, which is how right derivatives of series are obtained.
    """
    return evaluate(FracSeries(f.terms, 0.0), b - np.asarray(t, dtype=float))


def _power_rule(coefficient, exponent, alpha):
    return coefficient * gamma_ratio(1.0 + exponent, 1.0 + exponent - alpha), exponent - alpha


def frac_derive(f, alpha):
    """
    Riemann-Liouville type derivative of order alpha, term by term; constants map to zero.

    :raises DomainError: if a term has an exponent in (0, alpha)
    """
    _check_order(alpha)
    tol = exponent_tolerance()
    terms = []
    for c, e in f.terms:
        if e == 0.0:
            continue
        if e < alpha - tol:
            raise DomainError(
                "term {0}*t^{1} has an exponent in (0, {2}) and leaves the series class".format(c, e, alpha))
        terms.append(_power_rule(c, e, alpha))
    return FracSeries(tuple(terms), f.base_point)


def frac_derive_iterated(f, alpha, a):
    """ ``a``-fold composition of frac_derive """
    if a < 0:
        raise DomainError("iteration count must be non-negative")
    for _ in range(a):
        f = frac_derive(f, alpha)
    return f


def classical_derivative(f, order=1):
    """ Term-wise classical derivative, used to compare against the alpha -> 1 limit """
    terms = []
    for c, e in f.terms:
        coefficient = c
        for j in range(order):
            coefficient *= (e - j)
        if coefficient != 0.0:
            if e - order < 0:
                raise DomainError("classical derivative leaves the series class")
            terms.append((coefficient, e - order))
    return FracSeries(tuple(terms), f.base_point)


def semigroup_check(f, alpha, beta):
    """
    Largest coefficient discrepancy between D^beta f and D^alpha D^(beta-alpha) f.
    """
    if not 0 < alpha < beta <= 1:
        raise DomainError("semigroup check needs 0 < alpha < beta <= 1")
    direct = frac_derive(f, beta)
    composed = frac_derive(frac_derive(f, beta - alpha), alpha)
    return direct.max_coefficient_difference(composed)


def _falling_factorial(x, k):
    value = 1.0
    for j in range(k):
        value *= (x - j)
    return value


def leibniz_series(f1, f2, alpha, K):
    """
    Truncated fractional product rule.

    The constant part of ``f1`` is moved onto ``f2`` because the modified
    derivative subtracts the product's value at the base point; the
    remainder is expanded as sum_{k<=K} (alpha choose k) D^(alpha-k) f1 f2^(k)
    with D^(alpha-k) applied by the power rule.

    :raises DomainError: for inadmissible inputs
    """
    _check_order(alpha)
    if K < 0:
        raise DomainError("truncation order must be non-negative")
    f1._check_compatible(f2)
    c0 = f1.coefficient(0.0)
    result = frac_derive(f2, alpha) * c0 if c0 != 0.0 else FracSeries.zero(f1.base_point)
    frac_derive(f1, alpha)  # admissibility of f1

    terms = []
    for k in range(K + 1):
        weight = gen_binomial(alpha, k)
        if weight == 0.0:
            break
        for c1, e1 in f1.terms:
            if e1 == 0.0:
                continue
            c1k = c1 * gamma_ratio(1.0 + e1, 1.0 + e1 - alpha + k)
            for c2, e2 in f2.terms:
                ff = _falling_factorial(e2, k)
                if ff == 0.0:
                    continue
                terms.append((weight * c1k * c2 * ff, e1 + e2 - alpha))
    logging.getLogger(__name__).debug(
        "Leibniz series with {0} raw terms at K={1}".format(len(terms), K))
    return result + FracSeries(tuple(terms), f1.base_point)


def ml_reconstruct(f, alpha, H):
    """
    Fractional Taylor reconstruction sum_{h<=H} t^(alpha h)/Gamma(1+alpha h) (D^(alpha h) f)(0).

    :raises DomainError: if an exponent is not a multiple of alpha or exceeds H*alpha
    """
    _check_order(alpha)
    tol = exponent_tolerance()
    for c, e in f.terms:
        multiple = e / alpha
        if abs(multiple - round(multiple)) * alpha > tol:
            raise DomainError("exponent {0} is not a multiple of {1}".format(e, alpha))
        if round(multiple) > H:
            raise DomainError("exponent {0} needs more than H={1} terms".format(e, H))
    terms = []
    derivative = f
    for h in range(H + 1):
        if h > 0:
            derivative = frac_derive(derivative, alpha)
        value = derivative.coefficient(0.0)
        if value != 0.0:
            terms.append((value / gamma(1.0 + alpha * h), alpha * h))
    return FracSeries(tuple(terms), f.base_point)


def jet_lift(curve, alpha, order):
    """
    Jet coordinates of a curve given per coordinate as series.

    Row 0 is the curve itself and row a >= 1 holds
    D^(alpha a) x / Gamma(1 + alpha a), the a-fold derivative normalized
    by the order-matched factor.

    :param curve: one series per coordinate
    :type curve: list of FracSeries
    :return: ``order + 1`` rows of series
    """
    rows = [list(curve)]
    current = list(curve)
    for a in range(1, order + 1):
        current = [frac_derive(x, alpha) for x in current]
        scale = 1.0 / gamma(1.0 + alpha * a)
        rows.append([x * scale for x in current])
    return rows
