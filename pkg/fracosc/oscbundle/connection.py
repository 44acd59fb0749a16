"""
Nonlinear connections on the osculator bundle in their primal (N) and dual
(M) coefficients, the adapted and dual bases, the metrical linear
connection and the Sasaki lift.
"""
import logging
from dataclasses import dataclass

import numpy as np

from .. import Config
from ..exceptions import DomainError, RankError, ConfigError, SingularityError
from ..expr import (
    Polynomial, poly_matrix, zero_matrix, matmul, matadd, matsub, matscale,
    matrix_at, matrix_difference, y_name, check_variables
)
from ..specfun import gamma_ratio
from .bundle import convention, spray_derivation, ladder_derivation


@dataclass(frozen=True)
class _Coefficients:
    n: int
    k: int
    alpha: float
    orders: tuple

    def __post_init__(self):
        orders = tuple(poly_matrix(m) for m in self.orders)
        if len(orders) != self.k:
            raise DomainError("{0} coefficient orders given for k={1}".format(len(orders), self.k))
        for m in orders:
            if len(m) != self.n or any(len(row) != self.n for row in m):
                raise DomainError("coefficient matrices must be {0}x{0}".format(self.n))
            for row in m:
                for entry in row:
                    check_variables(entry.to_expr(), self.n, self.k)
        object.__setattr__(self, "orders", orders)

    def order(self, a):
        """ 1-based order a in 1..k """
        return self.orders[a - 1]

    def at(self, point):
        """ Values of all orders at a jet point, shape (k, n, n) """
        env = point.environment()
        return np.array([matrix_at(m, env) for m in self.orders])

    def max_difference(self, other):
        return max(matrix_difference(a, b) for a, b in zip(self.orders, other.orders))

    def to_json(self):
        return {
            "alpha": self.alpha,
            "k": self.k,
            "n": self.n,
            "orders": [[[str(entry) for entry in row] for row in m] for m in self.orders]
        }


class DualCoefficients(_Coefficients):
    """ M^(alpha a)^i_j, a = 1..k, of the dual coframe """


class PrimalCoefficients(_Coefficients):
    """ N^(alpha a)^i_j, a = 1..k, of the adapted basis """


def _relation():
    relation = convention("dual_relation", "pairing")
    if relation not in ("pairing", "literal"):
        raise ConfigError("unknown dual relation convention '{0}'".format(relation))
    return relation


def dual_ladder(first, derivation, alpha, n, k):
    """
    M^(alpha) = first, M^(alpha (a+1)) = Gamma(alpha a)/Gamma(alpha (a+1)) (T M^(alpha a) + M^(alpha) M^(alpha a)).

    :param first: n x n polynomial matrix
    :param derivation: callable applying T to a polynomial
    """
    orders = [first]
    for a in range(1, k):
        current = orders[-1]
        derived = tuple(tuple(derivation(entry) for entry in row) for row in current)
        factor = gamma_ratio(alpha * a, alpha * (a + 1))
        orders.append(matscale(matadd(derived, matmul(first, current)), factor))
    return DualCoefficients(n, k, alpha, tuple(orders))


def spray_to_dual(s, scheme=None):
    """
    Dual coefficients determined by a spray: M^(alpha)^i_j = D^alpha_{y^j(alpha)} G^i,
    higher orders by the spray derivation ladder.

    :type s: fracosc.oscbundle.FracSpray
    """
    first = tuple(
        tuple(s.G[i].frac_partial(y_name(j + 1, 1), s.alpha) for j in range(s.n))
        for i in range(s.n)
    )
    return dual_ladder(first, lambda f: spray_derivation(f, s, scheme), s.alpha, s.n, s.k)


def riemann_ladder(first, alpha, n, k, scheme=None):
    """ dual_ladder driven by the G-free part of the spray derivation """
    return dual_ladder(first, lambda f: ladder_derivation(f, alpha, n, k, scheme), alpha, n, k)


def primal_to_dual(p):
    """
    M from N. Under ``pairing``: M^(m) = N^(m) + sum_{p<m} M^(m-p) N^(p);
    under ``literal``: M^(m) = N^(m) + sum_{p<m} N^(m-p) N^(p).
    """
    relation = _relation()
    M = []
    for m in range(1, p.k + 1):
        value = p.order(m)
        for q in range(1, m):
            left = M[m - q - 1] if relation == "pairing" else p.order(m - q)
            value = matadd(value, matmul(left, p.order(q)))
        M.append(value)
    return DualCoefficients(p.n, p.k, p.alpha, tuple(M))


def dual_to_primal(d):
    """ Inverse of :func:`primal_to_dual`, solving the triangular system order by order """
    relation = _relation()
    N = []
    for m in range(1, d.k + 1):
        value = d.order(m)
        for q in range(1, m):
            left = d.order(m - q) if relation == "pairing" else N[m - q - 1]
            value = matsub(value, matmul(left, N[q - 1]))
        N.append(value)
    return PrimalCoefficients(d.n, d.k, d.alpha, tuple(N))


def adapted_basis(p, at):
    """
    Columns of the adapted basis in the natural basis, flattened slot (a, i) -> a n + i.

    delta_(b,i) = d_(b,i) - sum_{c>b} N^(c-b)^j_i d_(c,j)
    """
    n, k = p.n, p.k
    values = p.at(at)
    A = np.eye((k + 1) * n)
    for b in range(k + 1):
        for c in range(b + 1, k + 1):
            A[c * n:(c + 1) * n, b * n:(b + 1) * n] = -values[c - b - 1]
    return A


def dual_basis(d, at):
    """
    Rows of the dual coframe in the natural coframe:
    delta y_(a,i) = sum_{c<=a} M^(a-c)^i_j d y_(c,j) with M^(0) = I.
    """
    n, k = d.n, d.k
    values = d.at(at)
    B = np.eye((k + 1) * n)
    for a in range(k + 1):
        for c in range(a):
            B[a * n:(a + 1) * n, c * n:(c + 1) * n] = values[a - c - 1]
    return B


def pairing_residual(d, at):
    """ max |B A - I| for the dual coframe of ``d`` and the adapted basis of its primal form """
    A = adapted_basis(dual_to_primal(d), at)
    B = dual_basis(d, at)
    return float(np.max(np.abs(B @ A - np.eye(len(A)))))


@dataclass(frozen=True)
class MetricField:
    """
    Symmetric n x n metric over the jet variables of order k.
    """
    n: int
    k: int
    g: tuple

    def __post_init__(self):
        g = poly_matrix(self.g)
        if len(g) != self.n or any(len(row) != self.n for row in g):
            raise DomainError("metric must be {0}x{0}".format(self.n))
        for row in g:
            for entry in row:
                check_variables(entry.to_expr(), self.n, self.k)
        transpose = tuple(tuple(g[j][i] for j in range(self.n)) for i in range(self.n))
        if matrix_difference(g, transpose) > 0.0:
            raise DomainError("metric is not symmetric")
        object.__setattr__(self, "g", g)

    def at(self, point):
        return matrix_at(self.g, point.environment())

    def inverse_at(self, point):
        """
        Numeric inverse at a jet point.

        :raises RankError: for a singular metric
        """
        value = self.at(point)
        if np.linalg.matrix_rank(value) < self.n:
            raise RankError("metric {0} is singular at {1}".format(
                value.tolist(), point.as_table().tolist()))
        condition = np.linalg.cond(value)
        if condition > float(Config.get("numerics", "condition_warning", 1e12)):
            logging.getLogger(__name__).warning(
                "metric condition number {0:.3e} at {1}".format(condition, point.as_table().tolist()))
        return np.linalg.inv(value)


@dataclass
class MetricalConnection:
    """
    L[i, j, l] = L^i_jl and C[b - 1, i, j, l] = C^(alpha b)^i_jl at one jet point.
    """
    L: np.ndarray
    C: np.ndarray

    def horizontal_symmetry_residual(self):
        return float(np.max(np.abs(self.L - np.swapaxes(self.L, 1, 2))))

    def vertical_symmetry_residual(self):
        if self.C.size == 0:
            return 0.0
        return float(np.max(np.abs(self.C - np.swapaxes(self.C, 2, 3))))

    def to_json(self):
        return {"L": self.L.tolist(), "C": self.C.tolist()}


def _natural_partials(entries, alpha, n, k, env):
    """
    Fractional partials of polynomial values along every natural slot,
    shape ((k + 1) n,) + shape of ``entries``.
    """
    entries = np.asarray(entries, dtype=object)
    out = np.empty(((k + 1) * n,) + entries.shape)
    for c in range(k + 1):
        for j in range(n):
            name = y_name(j + 1, c)
            out[c * n + j] = np.vectorize(
                lambda entry: entry.frac_partial(name, alpha).evaluate(env), otypes=[float]
            )(entries)
    return out


def _adapted_partials(entries, p, at):
    """ Derivatives along the adapted basis, shape (k + 1, n) + shape of ``entries`` """
    A = adapted_basis(p, at)
    natural = _natural_partials(entries, p.alpha, p.n, p.k, at.environment())
    adapted = np.tensordot(A.T, natural, axes=1)
    return adapted.reshape((p.k + 1, p.n) + natural.shape[1:])


def _christoffel_like(inverse, derivative):
    """ Gamma^i_jl = 1/2 g^is (d_j g_sl + d_l g_js - d_s g_jl) with d[m, a, b] = d_m g_ab """
    first = np.einsum("jsl->sjl", derivative)
    second = np.einsum("ljs->sjl", derivative)
    third = np.einsum("sjl->sjl", derivative)
    return 0.5 * np.einsum("is,sjl->ijl", inverse, first + second - third)


def metrical_connection(g, p, at):
    """
    Coefficients L and C of the metrical linear connection at a jet point.

    :type g: MetricField
    :type p: PrimalCoefficients
    :type at: fracosc.oscbundle.JetPoint
    :raises RankError: for a singular metric
    """
    if g.n != p.n or g.k != p.k:
        raise DomainError("metric and connection live on different bundles")
    inverse = g.inverse_at(at)
    adapted = _adapted_partials(g.g, p, at)
    L = _christoffel_like(inverse, adapted[0])
    C = np.array([_christoffel_like(inverse, adapted[b]) for b in range(1, p.k + 1)])
    return MetricalConnection(L, C)


def _lower_index_terms(values, connection):
    """ sum over lower indices q of Gamma^s_(i_q m) T_(..s..), trailing axis m """
    rank = values.ndim
    n = connection.shape[0]
    total = np.zeros(values.shape + (n,))
    for q in range(rank):
        contracted = np.tensordot(values, connection, axes=([q], [0]))
        total += np.moveaxis(contracted, rank - 1, q)
    return total


def covariant_derivative_d_tensor(t, conn, p, at):
    """
    Horizontal and vertical covariant derivatives of a covariant d-tensor field.

    T_(i1..ir|m) = Delta_(x^m) T - sum_q L^s_(i_q m) T_(..s..), and the vertical
    order b derivative uses Delta_(y^(alpha b) m) with C^(alpha b).

    :param t: nested tuples of polynomials, rank r >= 0
    :return: (horizontal array with trailing index m, vertical array (k, ..., m))
    """
    entries = np.asarray(t, dtype=object)
    env = at.environment()
    values = np.vectorize(lambda entry: Polynomial.from_expr(entry).evaluate(env), otypes=[float])(entries)
    polynomial_entries = np.vectorize(Polynomial.from_expr, otypes=[object])(entries)
    adapted = _adapted_partials(polynomial_entries, p, at)

    def moved(derivative):
        return np.moveaxis(derivative, 0, -1)

    horizontal = moved(adapted[0]) - _lower_index_terms(values, conn.L)
    vertical = np.array([
        moved(adapted[b]) - _lower_index_terms(values, conn.C[b - 1]) for b in range(1, p.k + 1)
    ])
    return horizontal, vertical


def metricity_residual(g, p, at):
    """ Largest covariant derivative of the metric with respect to its own connection """
    conn = metrical_connection(g, p, at)
    horizontal, vertical = covariant_derivative_d_tensor(g.g, conn, p, at)
    return max(float(np.max(np.abs(horizontal))), float(np.max(np.abs(vertical))))


def sasaki_lift(g, d, at):
    """
    The metric diag(g, ..., g) on the adapted coframe, written in the
    natural coframe as B^T diag(g) B.

    :raises SingularityError: if the result is not positive definite
    """
    value = g.at(at)
    B = dual_basis(d, at)
    blocks = np.kron(np.eye(d.k + 1), value)
    lifted = B.T @ blocks @ B
    try:
        np.linalg.cholesky(lifted)
    except np.linalg.LinAlgError:
        raise SingularityError("Sasaki lift is not positive definite at {0}".format(at.as_table().tolist()))
    return lifted


def zero_primal(n, k, alpha):
    return PrimalCoefficients(n, k, alpha, tuple(zero_matrix(n) for _ in range(k)))
