"""
Jet points of the k-order fractional osculator bundle, the Liouville
fields, the tangent structure and sprays.

Coefficient tables over the natural basis are arrays of shape (k + 1, n):
row 0 holds the D^alpha_x slots, row a the D^alpha_{y^(alpha a)} slots.
"""
import functools
import logging
from dataclasses import dataclass

import numpy as np

from .. import Config
from ..exceptions import DomainError, ConfigError, UnsupportedFormError, DivisionByZero
from ..expr import (
    Polynomial, check_variables, y_name, Var, Num, differentiate, evaluate
)
from ..expr.nodes import add, mul, power
from ..specfun import gamma, gamma_ratio


def convention(name, default):
    """ Current value of ``numerics.conventions.<name>`` """
    return Config.get("numerics", "conventions", name, default=default)


@dataclass(frozen=True)
class JetPoint:
    """
    Point (x, y^(alpha), ..., y^(alpha k)) of the bundle.

    :param x: chart coordinates, shape (n,)
    :param y: jet coordinates, shape (k, n), row a - 1 holds y^(alpha a)
    """
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).reshape(-1)
        y = np.asarray(self.y, dtype=float)
        if y.ndim == 1:
            y = y.reshape(1, -1)
        if y.shape[1] != len(x) or y.shape[0] < 1:
            raise DomainError("jet rows of shape {0} do not fit n={1}".format(y.shape, len(x)))
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_table(cls, table):
        table = np.asarray(table, dtype=float)
        return cls(table[0], table[1:])

    @classmethod
    def random(cls, rng, n, k, low=0.1, high=2.0):
        """ Uniform sample from [low, high]^((k + 1) n) """
        table = rng.uniform(low, high, size=(k + 1, n))
        return cls.from_table(table)

    @property
    def n(self):
        return len(self.x)

    @property
    def k(self):
        return self.y.shape[0]

    def row(self, a):
        """ Row a of the table, row 0 is x """
        return self.x if a == 0 else self.y[a - 1]

    def as_table(self):
        return np.vstack([self.x, self.y])

    def environment(self):
        env = {}
        for a in range(self.k + 1):
            for i, value in enumerate(self.row(a)):
                env[y_name(i + 1, a)] = value
        return env

    def is_regular(self):
        """ y^(alpha) does not vanish """
        return bool(np.any(self.y[0] != 0))


def liouville_weights(alpha, a, k=None, scheme=None):
    """
    Weights W(1..a) of the Liouville field of order a.

    ``ladder`` uses W(1) = Gamma(1 + alpha) and W(b) = Gamma(b alpha)/Gamma(alpha)
    for every field. ``literal`` gives the first field weight 1 and the last
    weight of the order-k field (k >= 3) Gamma(alpha (k - 1))/Gamma(alpha).
    """
    scheme = scheme or convention("liouville_weights", "ladder")
    if scheme not in ("ladder", "literal"):
        raise ConfigError("unknown Liouville weight convention '{0}'".format(scheme))
    weights = []
    for b in range(1, a + 1):
        if b == 1:
            if scheme == "literal" and a == 1:
                weights.append(1.0)
            else:
                weights.append(gamma(1.0 + alpha))
        elif scheme == "literal" and b == a and k is not None and a == k and k >= 3:
            weights.append(gamma_ratio(alpha * (k - 1), alpha))
        else:
            weights.append(gamma_ratio(b * alpha, alpha))
    return weights


def spray_weights(alpha, k, scheme=None):
    """ Weights of the spray, equal to those of the order-k Liouville field """
    return liouville_weights(alpha, k, k, scheme)


def liouville_field(a, at, alpha, scheme=None):
    """
    Coefficient table of Gamma^(alpha a) at a jet point: W(b) y^(alpha b)
    on the slots of order k - a + b, b = 1..a.
    """
    k = at.k
    if not 1 <= a <= k:
        raise DomainError("Liouville field order {0} outside 1..{1}".format(a, k))
    table = np.zeros((k + 1, at.n))
    for b, weight in enumerate(liouville_weights(alpha, a, k, scheme), start=1):
        table[k - a + b] = weight * at.row(b)
    return table


def tangent_structure(table):
    """ Shifts each slot row one order up and drops the top order """
    table = np.asarray(table, dtype=float)
    shifted = np.zeros_like(table)
    shifted[1:] = table[:-1]
    return shifted


def tangent_structure_matrix(n, k):
    """ Matrix of the tangent structure on the flattened (k + 1) n slots """
    return np.kron(np.eye(k + 1, k=-1), np.eye(n))


@dataclass(frozen=True)
class FracSpray:
    """
    Spray with components G^i over the jet variables of order k.

    :param G: one entry per coordinate; text, expressions or polynomials
    """
    n: int
    k: int
    alpha: float
    G: tuple

    def __post_init__(self):
        if self.k < 1 or self.n < 1:
            raise DomainError("spray needs n >= 1 and k >= 1")
        components = tuple(Polynomial.from_expr(g) for g in self.G)
        if len(components) != self.n:
            raise DomainError("{0} spray components for n={1}".format(len(components), self.n))
        for g in components:
            check_variables(g.to_expr(), self.n, self.k)
        object.__setattr__(self, "G", components)

    def at(self, point):
        env = point.environment()
        return np.array([g.evaluate(env) for g in self.G], dtype=float)

    def expressions(self):
        return [str(g) for g in self.G]


def spray_field(s, at, scheme=None):
    """
    Natural-basis table of the spray: W(b) y^(alpha b) on the slots of order
    b - 1 and -Gamma(alpha k)/Gamma(alpha) G^i on the top order.
    """
    if at.k != s.k or at.n != s.n:
        raise DomainError("jet point does not belong to the spray's bundle")
    table = np.zeros((s.k + 1, s.n))
    for b, weight in enumerate(spray_weights(s.alpha, s.k, scheme), start=1):
        table[b - 1] += weight * at.row(b)
    table[s.k] += -gamma_ratio(s.alpha * s.k, s.alpha) * s.at(at)
    return table


def spray_property_residual(s, points, scheme=None):
    """ Largest entry of J(S) - Gamma^(alpha k) over the given jet points """
    worst = 0.0
    for p in points:
        difference = tangent_structure(spray_field(s, p, scheme)) - liouville_field(s.k, p, s.alpha, scheme)
        worst = max(worst, float(np.max(np.abs(difference))))
    return worst


def ladder_derivation(f, alpha, n, k, scheme=None):
    """
    T(f) = sum_{b=1..k} W(b) y^(alpha b)_j D^alpha_{y^(alpha (b-1))_j} f,
    the spray derivation without its G part.

    :type f: Polynomial
    """
    result = Polynomial()
    for b, weight in enumerate(spray_weights(alpha, k, scheme), start=1):
        for j in range(1, n + 1):
            derivative = f.frac_partial(y_name(j, b - 1), alpha)
            if derivative.is_zero():
                continue
            result = result + derivative * Polynomial.variable(y_name(j, b)) * weight
    return result


def spray_derivation(f, s, scheme=None):
    """ The spray applied to ``f`` as a derivation through fractional partials """
    result = ladder_derivation(f, s.alpha, s.n, s.k, scheme)
    top = gamma_ratio(s.alpha * s.k, s.alpha)
    for j in range(1, s.n + 1):
        derivative = f.frac_partial(y_name(j, s.k), s.alpha)
        if not derivative.is_zero():
            result = result - derivative * s.G[j - 1] * top
    return result


# jet transformations

def _closed_entry(ui, vj, alpha):
    """
    (u)^(alpha-1) du/dv (v)^(1-alpha). Single-term u is combined in the
    monomial fragment, where the powers of v cancel when u is linear in v.
    """
    try:
        u = Polynomial.from_expr(ui)
    except (UnsupportedFormError, DivisionByZero):
        u = None
    if u is not None and u.is_zero():
        return Num(0.0)
    if u is not None and u.is_monomial() and next(iter(u.terms.values())) > 0:
        entry = u.power(alpha - 1.0) * u.classical_partial(vj.name) * Polynomial.variable(vj.name, 1.0 - alpha)
        return entry.to_expr()
    return mul(mul(power(ui, alpha - 1.0), differentiate(ui, vj.name)), power(vj, 1.0 - alpha))


def _closed_jacobian(u, v, alpha):
    """ J(u, v)^i_j = (u^i)^(alpha-1) du^i/dv^j (v^j)^(1-alpha) as expressions """
    return [[_closed_entry(ui, vj, alpha) for vj in v] for ui in u]


def _normalized(e):
    try:
        return Polynomial.from_expr(e).to_expr()
    except (UnsupportedFormError, DivisionByZero):
        return e


@functools.lru_cache(maxsize=64)
def jet_transform_expressions(m, k, scheme):
    """
    Expressions of xbar, ybar^(alpha), ..., ybar^(alpha k) over the jet
    variables of the source chart.

    Order a >= 2 follows W(a) ybar^(a) = sum_{b=1..a} W(b) J(ybar^(a-1), y^(b-1)) y^(b).
    """
    alpha = m.alpha
    n = m.n
    rows = [[_normalized(e) for e in m.forward]]
    source = [[Var(y_name(i + 1, a)) for i in range(n)] for a in range(k + 1)]
    weights = liouville_weights(alpha, k, k, scheme)
    for a in range(1, k + 1):
        if a == 1:
            lhs = weights[0]
        elif scheme == "literal":
            lhs = gamma_ratio(alpha * (a - 1), alpha)
        else:
            lhs = weights[a - 1]
        row = [Num(0.0) for _ in range(n)]
        for b in range(1, a + 1):
            jacobian = _closed_jacobian(rows[a - 1], source[b - 1], alpha)
            for i in range(n):
                for j in range(n):
                    term = mul(Num(weights[b - 1] / lhs), mul(jacobian[i][j], source[b][j]))
                    row[i] = add(row[i], term)
        rows.append([_normalized(e) for e in row])
    return tuple(tuple(r) for r in rows)


def jet_transform(p, m, scheme=None):
    """
    Jet coordinates of ``p`` in the chart xbar = m.forward(x).

    :type p: JetPoint
    :type m: fracosc.geometry.ChartMap
    :raises SingularityError: outside the positive orthant
    """
    scheme = scheme or convention("liouville_weights", "ladder")
    if p.n != m.n:
        raise DomainError("chart map of dimension {0} applied to a jet of dimension {1}".format(m.n, p.n))
    m.chart.check_interior(p.x)
    rows = jet_transform_expressions(m, p.k, scheme)
    env = p.environment()
    table = np.array([[evaluate(e, env) for e in row] for row in rows], dtype=float)
    logging.getLogger(__name__).debug("jet transform cache: {0}".format(jet_transform_expressions.cache_info()))
    return JetPoint.from_table(table)


def jet_roundtrip_residual(p, m, scheme=None):
    """ max |p - T_inverse(T(p))| """
    there = jet_transform(p, m, scheme)
    back = jet_transform(there, m.inverted(), scheme)
    return float(np.max(np.abs(back.as_table() - p.as_table())))

