"""
Chart-level fractional geometry: fractional Jacobians of chart maps and
the fractional exterior derivative of 0- and 1-forms.

Chart maps live on the open positive orthant, the power-weighted Jacobian
divides by coordinate powers and is singular on coordinate hyperplanes.
"""
import enum
import logging
from dataclasses import dataclass

import numpy as np

from . import Config
from .exceptions import (
    DomainError, SingularityError, RankError, UnsupportedFormError, UnknownIdentifierError
)
from .expr import (
    parse, evaluate, check_variables, x_name, Num, Var, Polynomial, to_text
)
from .expr.nodes import mul, div, power
from .fracnum import SampledFunction, gl_derivative
from .specfun import gamma


@dataclass(frozen=True)
class Chart:
    """
    Local chart with coordinates x1..xn on the box [lower, upper]^n.
    """
    n: int
    lower: float = 0.0
    upper: float = float("inf")

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("chart dimension must be at least 1")
        if not self.lower < self.upper:
            raise DomainError("empty admissible box")

    @property
    def names(self):
        return tuple(x_name(i + 1) for i in range(self.n))

    def environment(self, point):
        point = _as_point(point, self.n)
        return dict(zip(self.names, point))

    def check_interior(self, point):
        """ Points must lie strictly inside the box and in the open positive orthant """
        point = _as_point(point, self.n)
        if np.any(point <= 0):
            raise SingularityError("coordinates must be positive, got {0}".format(point.tolist()))
        if np.any(point <= self.lower) or np.any(point >= self.upper):
            raise SingularityError("point {0} is outside ({1}, {2})^{3}".format(
                point.tolist(), self.lower, self.upper, self.n))
        return point


def _as_point(point, n):
    point = np.asarray(point, dtype=float).reshape(-1)
    if len(point) != n:
        raise DomainError("point has {0} coordinates, chart has {1}".format(len(point), n))
    return point


def _parse_all(expressions, n):
    parsed = tuple(parse(e) if isinstance(e, str) else e for e in expressions)
    if len(parsed) != n:
        raise DomainError("{0} expressions given for dimension {1}".format(len(parsed), n))
    for e in parsed:
        check_variables(e, n)
    return parsed


@dataclass(frozen=True)
class ChartMap:
    """
    Change of chart xbar = forward(x) with its inverse x = inverse(xbar).

    Both directions are written over x1..xn; the inverse is evaluated with
    x<i> bound to the values of xbar<i>.

    :param forward: one expression per coordinate of xbar
    :param inverse: one expression per coordinate of x
    :param alpha: fractional order in (0, 1]
    """
    forward: tuple
    inverse: tuple
    alpha: float

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise DomainError("alpha must lie in (0, 1], got {0}".format(self.alpha))
        n = len(self.forward)
        object.__setattr__(self, "forward", _parse_all(self.forward, n))
        object.__setattr__(self, "inverse", _parse_all(self.inverse, n))

    @classmethod
    def from_text(cls, forward, inverse, alpha):
        return cls(tuple(forward), tuple(inverse), float(alpha))

    @classmethod
    def identity(cls, n, alpha):
        names = tuple(Var(x_name(i + 1)) for i in range(n))
        return cls(names, names, alpha)

    @property
    def n(self):
        return len(self.forward)

    @property
    def chart(self):
        return Chart(self.n)

    def inverted(self):
        return ChartMap(self.inverse, self.forward, self.alpha)

    def apply(self, point, direction=None):
        direction = direction or Direction.Forward
        expressions = self.forward if direction == Direction.Forward else self.inverse
        env = self.chart.environment(point)
        return np.array([evaluate(e, env) for e in expressions], dtype=float)

    def roundtrip_residual(self, points):
        """ Largest |inverse(forward(x)) - x| over sampled points """
        worst = 0.0
        for point in points:
            point = _as_point(point, self.n)
            back = self.apply(self.apply(point), Direction.Inverse)
            worst = max(worst, float(np.max(np.abs(back - point))))
        return worst

    def __str__(self):
        return "[{0}] <-> [{1}]".format(
            ", ".join(to_text(e) for e in self.forward),
            ", ".join(to_text(e) for e in self.inverse))


class Direction(enum.Enum):
    #: J(xbar, x), differentiating the forward map
    Forward = enum.auto()
    #: J(x, xbar), differentiating the inverse map at xbar = forward(x)
    Inverse = enum.auto()


def _central_difference(e, names, point, var_index, step):
    env = dict(zip(names, point))
    up = dict(env)
    down = dict(env)
    up[names[var_index]] = point[var_index] + step
    down[names[var_index]] = point[var_index] - step
    return (evaluate(e, up) - evaluate(e, down)) / (2.0 * step)


def classical_jacobian(expressions, point):
    """
    Matrix of classical partials d e_i / d x_j at ``point``.

    Exact on the monomial fragment, central differences with the
    configured step otherwise.
    """
    n = len(expressions)
    point = _as_point(point, n)
    names = [x_name(j + 1) for j in range(n)]
    env = dict(zip(names, point))
    step = float(Config.get("numerics", "central_difference_step", 1e-6))
    jacobian = np.empty((n, n))
    for i, e in enumerate(expressions):
        try:
            p = Polynomial.from_expr(e)
        except UnsupportedFormError:
            logging.getLogger(__name__).debug(
                "central differences for '{0}' with step {1}".format(to_text(e), step))
            for j in range(n):
                jacobian[i, j] = _central_difference(e, names, point, j, step)
            continue
        for j in range(n):
            jacobian[i, j] = p.classical_partial(names[j]).evaluate(env)
    return jacobian


def _weighted(classical, upper, lower, alpha):
    # J^i_j = (upper^i)^(alpha-1) * classical^i_j * (lower^j)^(1-alpha)
    return (upper ** (alpha - 1.0))[:, None] * classical * (lower ** (1.0 - alpha))[None, :]


def frac_jacobian(m, at, direction=Direction.Forward):
    """
    Fractional Jacobian in its power-weighted closed form.

    Forward gives J(xbar, x) at ``at``, inverse gives J(x, xbar) at the
    image point xbar = forward(at). Their product is the identity.

    :param m: chart map
    :type m: ChartMap
    :param at: point x with positive coordinates
    :raises SingularityError: for non-positive coordinates of x or xbar
    :raises RankError: when the classical Jacobian is rank deficient
    """
    chart = m.chart
    x = chart.check_interior(at)
    xbar = m.apply(x)
    if np.any(xbar <= 0):
        raise SingularityError("image point {0} leaves the positive orthant".format(xbar.tolist()))
    if direction == Direction.Forward:
        classical = classical_jacobian(m.forward, x)
        upper, lower = xbar, x
    else:
        classical = classical_jacobian(m.inverse, xbar)
        upper, lower = x, xbar
    rank = np.linalg.matrix_rank(classical)
    if rank < m.n:
        raise RankError("classical Jacobian at {0} has rank {1} < {2}".format(x.tolist(), rank, m.n))
    return _weighted(classical, upper, lower, m.alpha)


def jacobian_identity_residual(m, at):
    """ max |J(x, xbar) J(xbar, x) - I| """
    product = frac_jacobian(m, at, Direction.Inverse) @ frac_jacobian(m, at, Direction.Forward)
    return float(np.max(np.abs(product - np.eye(m.n))))


def frac_jacobian_power_rule(m, at):
    """
    The Gamma-normalized form D^alpha_{xbar^j} (x^i)^alpha / Gamma(1 + alpha)
    of J(x, xbar), exact for inverse maps whose components are single terms.

    :raises UnsupportedFormError: if an inverse component is not a single term
    """
    x = m.chart.check_interior(at)
    xbar = m.apply(x)
    names = [x_name(j + 1) for j in range(m.n)]
    env = dict(zip(names, xbar))
    result = np.empty((m.n, m.n))
    for i, e in enumerate(m.inverse):
        component = Polynomial.from_expr(e)
        if not component.is_monomial():
            raise UnsupportedFormError(
                "power-rule Jacobian needs single-term inverse components, got {0}".format(component))
        raised = component.power(m.alpha)
        for j, name in enumerate(names):
            result[i, j] = raised.frac_partial(name, m.alpha).evaluate(env) / gamma(1.0 + m.alpha)
    return result


def jacobian_form_discrepancy(m, at):
    """
    Largest entrywise difference between the closed and Gamma-normalized
    Jacobian forms. Both agree on diagonal linear maps and at alpha = 1.
    """
    return float(np.max(np.abs(
        frac_jacobian_power_rule(m, at) - frac_jacobian(m, at, Direction.Inverse))))


def transform_vector(m, at, components):
    """ Xbar = J(xbar, x) X for the components of a fractional vector at ``at`` """
    return frac_jacobian(m, at, Direction.Forward) @ np.asarray(components, dtype=float)


class Basis(enum.Enum):
    #: components on dx^j
    Classical = enum.auto()
    #: components on d(x^j)^alpha
    Fractional = enum.auto()


@dataclass(frozen=True)
class FracOneForm:
    """
    One-form a_j dx^j or b_j d(x^j)^alpha; components are expressions over x1..xn.
    """
    components: tuple
    basis: Basis = Basis.Fractional

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(
            parse(c) if isinstance(c, str) else c for c in self.components))

    @property
    def n(self):
        return len(self.components)

    def to_fractional_basis(self, alpha):
        """ Uses d(x^j)^alpha = alpha (x^j)^(alpha-1) dx^j """
        if self.basis == Basis.Fractional:
            return self
        converted = []
        for j, a in enumerate(self.components):
            converted.append(div(mul(a, power(Var(x_name(j + 1)), 1.0 - alpha)), Num(alpha)))
        return FracOneForm(tuple(converted), Basis.Fractional)

    def at(self, point):
        env = Chart(self.n).environment(point)
        return np.array([evaluate(c, env) for c in self.components], dtype=float)


def frac_partial_at(f, var, alpha, point, step=1e-3):
    """
    Numeric fractional partial of ``f`` along ``var`` at ``point``, by the
    Grünwald-Letnikov scheme on [0, point[var]] with the other coordinates frozen.
    """
    n = len(point)
    names = [x_name(j + 1) for j in range(n)]
    axis = names.index(var)
    env = dict(zip(names, np.asarray(point, dtype=float)))
    end = env[var]
    count = max(2, int(round(end / step)))
    samples = np.linspace(0.0, end, count + 1)
    env[var] = samples
    values = evaluate(f, env) * np.ones_like(samples)
    derivative = gl_derivative(SampledFunction(0.0, end / count, values), alpha)
    logging.getLogger(__name__).debug(
        "numeric fractional partial along axis {0} with {1} nodes".format(axis + 1, count + 1))
    return float(derivative.values[-1])


def exterior_d0(f, alpha, n, at=None):
    """
    d^alpha f = D^alpha_{x^i} f d(x^i)^alpha.

    Exact on the monomial fragment. Outside it the components are computed
    numerically at the point ``at`` when one is given.

    :raises UnsupportedFormError: for forms outside the fragment without ``at``
    """
    if isinstance(f, str):
        f = parse(f)
    check_variables(f, n)
    names = [x_name(i + 1) for i in range(n)]
    try:
        p = Polynomial.from_expr(f)
    except UnsupportedFormError:
        if at is None:
            raise
        return FracOneForm(tuple(Num(frac_partial_at(f, name, alpha, at)) for name in names))
    return FracOneForm(tuple(p.frac_partial(name, alpha).to_expr() for name in names))


@dataclass(frozen=True)
class FracTwoForm:
    """
    Antisymmetric coefficients c_ij of d(x^i)^alpha ^ d(x^j)^alpha as polynomials.
    """
    coefficients: tuple

    @property
    def n(self):
        return len(self.coefficients)

    def coefficient(self, i, j):
        """ 1-based coefficient of d(x^i)^alpha ^ d(x^j)^alpha """
        return self.coefficients[i - 1][j - 1]

    def max_coefficient(self):
        return max((abs(c) for row in self.coefficients for entry in row for c in entry.terms.values()),
                   default=0.0)

    def at(self, point):
        env = Chart(self.n).environment(point)
        return np.array([[entry.evaluate(env) for entry in row] for row in self.coefficients])


def exterior_d1(w, alpha):
    """
    d^alpha (b_j d(x^j)^alpha) with coefficient D^alpha_{x^i} b_j - D^alpha_{x^j} b_i
    on d(x^i)^alpha ^ d(x^j)^alpha.

    :raises UnsupportedFormError: for components outside the monomial fragment
    """
    w = w.to_fractional_basis(alpha)
    n = w.n
    for c in w.components:
        try:
            check_variables(c, n)
        except UnknownIdentifierError:
            raise DomainError("one-form components may only use x1..x{0}".format(n))
    names = [x_name(i + 1) for i in range(n)]
    b = [Polynomial.from_expr(c) for c in w.components]
    partial = [[b[j].frac_partial(names[i], alpha) for j in range(n)] for i in range(n)]
    coefficients = tuple(
        tuple(partial[i][j] - partial[j][i] for j in range(n)) for i in range(n)
    )
    return FracTwoForm(coefficients)
