"""
Fractional Lagrangians of order k on the osculator bundle: the fundamental
tensor, Euler-Lagrange operators with fractional and classical partials,
the Craig-Synge covectors and the spray a regular Lagrangian determines.

Operators are built symbolically on the monomial fragment and sampled
along curves through the jet lift of their series.
"""
import logging
from dataclasses import dataclass

import numpy as np

from .. import Config
from ..exceptions import DomainError, ConfigError
from ..expr import Polynomial, check_variables, y_name, symbolic_inverse
from ..fracseries import FracSeries, jet_lift, evaluate as evaluate_series
from ..fracnum import residual_nodes, trapezoid
from ..oscbundle import FracSpray, JetPoint, liouville_weights, ladder_derivation
from ..oscbundle.bundle import convention
from ..specfun import gamma, gamma_ratio


@dataclass(frozen=True)
class FracLagrangian:
    """
    Lagrangian L(x, y^(alpha), ..., y^(alpha k)).

    :param L: text, expression or polynomial in the monomial fragment
    """
    n: int
    k: int
    alpha: float
    L: Polynomial

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise DomainError("Lagrangian needs n >= 1 and k >= 1")
        if not 0 < self.alpha <= 1:
            raise DomainError("alpha must lie in (0, 1], got {0}".format(self.alpha))
        L = Polynomial.from_expr(self.L)
        check_variables(L.to_expr(), self.n, self.k)
        object.__setattr__(self, "L", L)

    def partial(self, i, a, fractional=True):
        """ Partial of L in y^(alpha a)_i, a = 0 meaning x_i """
        return self.L.partial(y_name(i, a), self.alpha, fractional)

    def at(self, point):
        return self.L.evaluate(point.environment())


def _as_series(c):
    if isinstance(c, FracSeries):
        return c
    if isinstance(c, str):
        return FracSeries.from_json(c)
    return FracSeries(tuple(tuple(term) for term in c))


@dataclass(frozen=True)
class ExtremalCurve:
    """
    Curve t -> x(t) on [0, 1] with one fractional power series per coordinate.
    """
    components: tuple

    def __post_init__(self):
        components = tuple(_as_series(c) for c in self.components)
        if not components:
            raise DomainError("a curve needs at least one coordinate")
        object.__setattr__(self, "components", components)

    @property
    def n(self):
        return len(self.components)

    def environment(self, alpha, order, nodes):
        """
        Jet coordinates along the curve up to ``order`` sampled at ``nodes``.

        :raises DomainError: when the curve is not admissible for ``order`` derivatives
        """
        rows = jet_lift(list(self.components), alpha, order)
        env = {}
        for a, row in enumerate(rows):
            for i, series in enumerate(row):
                env[y_name(i + 1, a)] = evaluate_series(series, nodes)
        return env


def _total_derivative_scheme():
    scheme = convention("total_derivative", "full")
    if scheme not in ("full", "truncated"):
        raise ConfigError("unknown total derivative convention '{0}'".format(scheme))
    return scheme


def total_derivative(f, alpha, n, upto, fractional=True):
    """
    d_t f = sum_{b=1..upto} y^(alpha b)_j P_{y^(alpha (b-1))_j} f with P the
    fractional or the classical partial.

    :type f: Polynomial
    """
    result = Polynomial()
    for b in range(1, upto + 1):
        for j in range(1, n + 1):
            derivative = f.partial(y_name(j, b - 1), alpha, fractional)
            if not derivative.is_zero():
                result = result + derivative * Polynomial.variable(y_name(j, b))
    return result


def _derivative_range(lag, a):
    return lag.k + 1 if _total_derivative_scheme() == "full" else a


def el_operator(lag, fractional=True):
    """
    P_{x^i} L + sum_{a=1..k} (-1)^a d_t(P_{y^i(alpha a)} L) for each i.

    :return: tuple of polynomials over jets of order k + 1
    """
    operators = []
    for i in range(1, lag.n + 1):
        value = lag.partial(i, 0, fractional)
        for a in range(1, lag.k + 1):
            term = total_derivative(lag.partial(i, a, fractional), lag.alpha, lag.n,
                                    _derivative_range(lag, a), fractional)
            value = value + term * float((-1) ** a)
        operators.append(value)
    return tuple(operators)


def el_operator_frac(lag):
    return el_operator(lag, fractional=True)


def el_operator_classical(lag):
    return el_operator(lag, fractional=False)


def sample_operators(operators, lag, curve, nodes=None):
    """
    Values of per-coordinate operators along a curve, shape (n, len(nodes)).
    """
    if curve.n != lag.n:
        raise DomainError("curve has {0} coordinates, Lagrangian expects {1}".format(curve.n, lag.n))
    if nodes is None:
        nodes = residual_nodes()
    nodes = np.asarray(nodes, dtype=float)
    env = curve.environment(lag.alpha, lag.k + 1, nodes)
    return np.array([np.ones_like(nodes) * op.evaluate(env) for op in operators])


def el_residual_frac(lag, curve, nodes=None):
    """ Euler-Lagrange residual with fractional partials, shape (n, len(nodes)) """
    return sample_operators(el_operator_frac(lag), lag, curve, nodes)


def el_residual_classical(lag, curve, nodes=None):
    """ Euler-Lagrange residual with classical partials, shape (n, len(nodes)) """
    return sample_operators(el_operator_classical(lag), lag, curve, nodes)


def el_discrepancy(lag, curve, nodes=None):
    """ Largest difference between the two Euler-Lagrange residuals along a curve """
    return float(np.max(np.abs(el_residual_frac(lag, curve, nodes) - el_residual_classical(lag, curve, nodes))))


def fundamental_tensor_field(lag):
    """ g_ij = 1/2 D^alpha_{y^i(alpha)} D^alpha_{y^j(alpha)} L """
    names = [y_name(i + 1, 1) for i in range(lag.n)]
    return tuple(
        tuple(lag.L.frac_partial(names[j], lag.alpha).frac_partial(names[i], lag.alpha) * 0.5
              for j in range(lag.n))
        for i in range(lag.n)
    )


def fundamental_tensor(lag, at):
    """
    Fundamental tensor at a jet point together with its regularity.

    :return: (matrix, full rank flag)
    """
    value = np.array([[entry.evaluate(at.environment()) for entry in row]
                      for row in fundamental_tensor_field(lag)], dtype=float)
    regular = bool(np.linalg.matrix_rank(value) == lag.n)
    if not regular:
        logging.getLogger(__name__).info(
            "fundamental tensor is degenerate at {0}".format(at.as_table().tolist()))
    return value, regular


def craig_synge_operator(lag, level, fractional=True):
    """
    Craig-Synge covector of the given level.

    Level 0 is P_x L + sum_{a=1..k} (-1)^a / Gamma(1 + alpha a) d_t(P_{y(alpha a)} L);
    level b >= 1 keeps the terms a >= b of the sum.
    """
    if not 0 <= level <= lag.k:
        raise DomainError("Craig-Synge level {0} outside 0..{1}".format(level, lag.k))
    operators = []
    for i in range(1, lag.n + 1):
        value = lag.partial(i, 0, fractional) if level == 0 else Polynomial()
        for a in range(max(1, level), lag.k + 1):
            term = total_derivative(lag.partial(i, a, fractional), lag.alpha, lag.n,
                                    _derivative_range(lag, a), fractional)
            value = value + term * ((-1) ** a / gamma(1.0 + lag.alpha * a))
        operators.append(value)
    return tuple(operators)


def craig_synge(lag, curve, level, nodes=None):
    """ Craig-Synge covector of ``level`` sampled along a curve """
    return sample_operators(craig_synge_operator(lag, level), lag, curve, nodes)


def _liouville_first(lag, f):
    """ Gamma^alpha(f) = W(1) y^(alpha)_m D^alpha_{y^(alpha k)_m} f """
    weight = liouville_weights(lag.alpha, 1, lag.k)[0]
    result = Polynomial()
    for m in range(1, lag.n + 1):
        derivative = f.frac_partial(y_name(m, lag.k), lag.alpha)
        if not derivative.is_zero():
            result = result + derivative * Polynomial.variable(y_name(m, 1)) * weight
    return result


def craig_synge_closed_form(lag):
    """
    (-1)^(k-1)/Gamma(1 + alpha (k-1)) (D_{y(alpha (k-1))} L - Gamma^alpha(D_{y(alpha k)} L) - g_ij y^(alpha (k+1))_j)
    """
    k = lag.k
    g = fundamental_tensor_field(lag)
    scale = (-1) ** (k - 1) / gamma(1.0 + lag.alpha * (k - 1))
    operators = []
    for i in range(1, lag.n + 1):
        value = lag.partial(i, k - 1) - _liouville_first(lag, lag.partial(i, k))
        for j in range(1, lag.n + 1):
            value = value - g[i - 1][j - 1] * Polynomial.variable(y_name(j, k + 1))
        operators.append(value * scale)
    return tuple(operators)


def craig_synge_discrepancy(lag, curve, nodes=None):
    """ Closed form against the level k - 1 operator along a curve """
    closed = sample_operators(craig_synge_closed_form(lag), lag, curve, nodes)
    operator = craig_synge(lag, curve, lag.k - 1, nodes)
    return float(np.max(np.abs(closed - operator)))


def extract_spray(lag, scheme=None):
    """
    Spray of a regular Lagrangian:
    G^i = Gamma(alpha)/(Gamma(1 + alpha k) Gamma(1 + alpha)) g^ij [T(D_{y^j(alpha k)} L) - D_{y^j(alpha (k-1))} L]
    with T the ladder derivation sum_b W(b) y^(alpha b) D_{y^(alpha (b-1))}.
    Lagrangians free of x at k = 1 give the zero spray.

    :raises RankError: for a singular fundamental tensor
    :raises UnsupportedFormError: when g has no inverse on the monomial fragment
    """
    k, alpha = lag.k, lag.alpha
    inverse = symbolic_inverse(fundamental_tensor_field(lag))
    bracket = [
        ladder_derivation(lag.partial(j, k), alpha, lag.n, k, scheme) - lag.partial(j, k - 1)
        for j in range(1, lag.n + 1)
    ]
    scale = gamma(alpha) / (gamma(1.0 + alpha * k) * gamma(1.0 + alpha))
    G = []
    for i in range(lag.n):
        value = Polynomial()
        for j in range(lag.n):
            value = value + inverse[i][j] * bracket[j]
        G.append(value * scale)
    return FracSpray(lag.n, k, alpha, tuple(G))


def action(lag, curve, count=None):
    """ I(c) = int_0^1 L(jet lift of c) dt by the trapezoidal rule """
    if count is None:
        count = int(Config.get("numerics", "residual_nodes", 33))
    nodes = np.linspace(0.0, 1.0, count + 1)
    env = curve.environment(lag.alpha, lag.k, nodes)
    values = np.ones_like(nodes) * lag.L.evaluate(env)
    return float(trapezoid(values, nodes[1] - nodes[0]))


@dataclass(frozen=True)
class ThirdOrderExample:
    """
    The third-order scalar example
    c Gamma(1+gamma)/Gamma(1+gamma-alpha) x^(gamma-alpha) + sum_a a_a Gamma(1+(a+1) alpha) y^(alpha (a+1)) = 0
    and the Lagrangians that produce it.
    """
    c: float = 1.0
    gamma: float = 2.0
    a: tuple = (1.0, 1.0, 1.0)
    alpha: float = 0.3

    def _x(self, exponent):
        return Polynomial.variable(y_name(1, 0), exponent)

    def _y(self, order, exponent):
        return Polynomial.variable(y_name(1, order), exponent)

    def expected(self):
        alpha = self.alpha
        value = self._x(self.gamma - alpha) * (self.c * gamma_ratio(1.0 + self.gamma, 1.0 + self.gamma - alpha))
        for order, coefficient in enumerate(self.a, start=1):
            value = value + self._y(order + 1, 1.0) * (coefficient * gamma(1.0 + (order + 1) * alpha))
        return value

    def fractional_lagrangian(self):
        """ Reading whose fractional Euler-Lagrange operator is the expected one """
        alpha = self.alpha
        a1, a2, a3 = self.a
        L = (self._x(self.gamma) * self.c
             - self._y(1, 2 * alpha) * a1
             + self._y(2, 2 * alpha) * (a2 * gamma_ratio(1 + 3 * alpha, 1 + 2 * alpha))
             - self._y(3, 2 * alpha) * (a3 * gamma_ratio(1 + 4 * alpha, 1 + 2 * alpha)))
        return FracLagrangian(1, 3, alpha, L)

    def literal_lagrangian(self):
        """ The first Lagrangian as displayed, exponents alpha on every jet variable """
        alpha = self.alpha
        a1, a2, a3 = self.a
        L = (self._x(self.gamma) * (self.c / (1.0 + self.gamma - alpha))
             - self._y(1, alpha) * (a1 * gamma(1 + 2 * alpha))
             + self._y(2, alpha) * (a2 * gamma(1 + 3 * alpha))
             - self._y(3, alpha) * (a3 * gamma(1 + 4 * alpha)))
        return FracLagrangian(1, 3, alpha, L)

    def classical_lagrangian(self):
        """ Quadratic Lagrangian whose classical Euler-Lagrange operator is the expected one """
        alpha = self.alpha
        a1, a2, a3 = self.a
        exponent = self.gamma - alpha + 1.0
        c = self.c * gamma_ratio(1.0 + self.gamma, 1.0 + self.gamma - alpha) / exponent
        L = (self._x(exponent) * c
             - self._y(1, 2.0) * (a1 / 2.0 * gamma(1 + 2 * alpha))
             + self._y(2, 2.0) * (a2 / 2.0 * gamma(1 + 3 * alpha))
             - self._y(3, 2.0) * (a3 / 2.0 * gamma(1 + 4 * alpha)))
        return FracLagrangian(1, 3, alpha, L)

    def literal_classical_lagrangian(self):
        """
        The second Lagrangian as displayed, position term
        c Gamma(1+gamma)/(Gamma(1+gamma-alpha)(gamma-alpha+1)) x^(gamma-alpha-1).
        Its classical operator differs from the expected field in the x term only.
        """
        alpha = self.alpha
        a1, a2, a3 = self.a
        exponent = self.gamma - alpha - 1.0
        c = self.c * gamma_ratio(1.0 + self.gamma, 1.0 + self.gamma - alpha) / (self.gamma - alpha + 1.0)
        L = (self._x(exponent) * c
             - self._y(1, 2.0) * (a1 / 2.0 * gamma(1 + 2 * alpha))
             + self._y(2, 2.0) * (a2 / 2.0 * gamma(1 + 3 * alpha))
             - self._y(3, 2.0) * (a3 / 2.0 * gamma(1 + 4 * alpha)))
        return FracLagrangian(1, 3, alpha, L)

    def discrepancy(self, lag, fractional=True):
        """ Largest coefficient of the Euler-Lagrange operator minus the expected field """
        return el_operator(lag, fractional)[0].max_abs_difference(self.expected())

    def sample_discrepancy(self, lag, points, fractional=True):
        """ Same comparison evaluated at jet points of order 4 """
        operator = el_operator(lag, fractional)[0]
        expected = self.expected()
        worst = 0.0
        for p in points:
            env = p.environment()
            worst = max(worst, abs(operator.evaluate(env) - expected.evaluate(env)))
        return worst


def random_jet_points(rng, n, k, count, low=0.1, high=2.0):
    return [JetPoint.random(rng, n, k, low, high) for _ in range(count)]
