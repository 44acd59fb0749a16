"""
Prolongation of Riemann metrics, Finsler functions and first-order
Lagrangians to dual nonlinear-connection coefficients on the k-order bundle.
"""
from dataclasses import dataclass

from ..exceptions import DomainError, ConfigError, UnsupportedFormError
from ..expr import Polynomial, poly_matrix, check_variables, y_name, symbolic_inverse
from ..oscbundle import FracSpray, riemann_ladder
from ..oscbundle.bundle import convention
from ..specfun import gamma
from .euler_lagrange import FracLagrangian


def christoffel(g, alpha, n, names):
    """
    gamma^l_ij = 1/2 g^ls (D_i g_sj + D_j g_is - D_s g_ij), partials along ``names``.

    :return: nested tuples indexed [l][i][j]
    :raises RankError: for a singular matrix
    :raises UnsupportedFormError: when g has no inverse on the monomial fragment
    """
    inverse = symbolic_inverse(g)
    derivative = [[[g[a][b].frac_partial(names[m], alpha) for b in range(n)] for a in range(n)]
                  for m in range(n)]
    lowered = [[[(derivative[i][s][j] + derivative[j][i][s] - derivative[s][i][j]) * 0.5
                 for j in range(n)] for i in range(n)] for s in range(n)]
    return tuple(
        tuple(
            tuple(sum((inverse[l][s] * lowered[s][i][j] for s in range(n)), Polynomial())
                  for j in range(n))
            for i in range(n))
        for l in range(n)
    )


def _x_names(n):
    return [y_name(i + 1, 0) for i in range(n)]


@dataclass(frozen=True)
class RiemannStructure:
    """ Metric g_ij(x) on the base manifold """
    n: int
    alpha: float
    g: tuple

    def __post_init__(self):
        g = poly_matrix(self.g)
        if len(g) != self.n or any(len(row) != self.n for row in g):
            raise DomainError("metric must be {0}x{0}".format(self.n))
        for row in g:
            for entry in row:
                check_variables(entry.to_expr(), self.n, 0)
        object.__setattr__(self, "g", g)

    def christoffel(self):
        return christoffel(self.g, self.alpha, self.n, _x_names(self.n))


def _first_from_christoffel(symbols, n):
    """ M^(alpha)^i_j = gamma^i_jm y^(alpha)_m """
    return tuple(
        tuple(sum((symbols[i][j][m] * Polynomial.variable(y_name(m + 1, 1)) for m in range(n)),
                  Polynomial())
              for j in range(n))
        for i in range(n)
    )


def prolong_riemann(r, k, scheme=None):
    """
    Dual coefficients of the prolonged Riemann structure.

    :type r: RiemannStructure
    :rtype: fracosc.oscbundle.DualCoefficients
    """
    first = _first_from_christoffel(r.christoffel(), r.n)
    return riemann_ladder(first, r.alpha, r.n, k, scheme)


def riemann_spray(r, k):
    """
    Geodesic spray of a one-dimensional Riemann structure,
    G = gamma y^(1 + alpha) / Gamma(2 + alpha), whose first dual coefficient is gamma y.

    :raises UnsupportedFormError: for n > 1
    """
    if r.n != 1:
        raise UnsupportedFormError("the geodesic spray is only built for n = 1")
    symbol = r.christoffel()[0][0][0]
    G = symbol * Polynomial.variable(y_name(1, 1), 1.0 + r.alpha) * (1.0 / gamma(2.0 + r.alpha))
    return FracSpray(1, k, r.alpha, (G,))


@dataclass(frozen=True)
class FinslerStructure:
    """
    Finsler function F(x, y^(alpha)); ``F2`` overrides F*F when the square
    is known in closed form.
    """
    n: int
    alpha: float
    F: Polynomial = None
    F2: Polynomial = None

    def __post_init__(self):
        if self.F is None and self.F2 is None:
            raise DomainError("a Finsler structure needs F or its square")
        F = Polynomial.from_expr(self.F) if self.F is not None else None
        F2 = Polynomial.from_expr(self.F2) if self.F2 is not None else F * F
        check_variables(F2.to_expr(), self.n, 1)
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "F2", F2)

    @classmethod
    def from_square(cls, n, alpha, F2):
        return cls(n, alpha, None, F2)

    def fundamental_tensor(self):
        """ gamma_ij = 1/2 D^alpha_{y^i} D^alpha_{y^j} F^2 """
        names = [y_name(i + 1, 1) for i in range(self.n)]
        return tuple(
            tuple(self.F2.frac_partial(names[j], self.alpha).frac_partial(names[i], self.alpha) * 0.5
                  for j in range(self.n))
            for i in range(self.n)
        )

    def christoffel(self):
        return christoffel(self.fundamental_tensor(), self.alpha, self.n, _x_names(self.n))


def cartan_coefficients(f):
    """ G^i_j = 1/2 D^alpha_{y^j(alpha)} (gamma^i_pm y^p y^m) """
    symbols = f.christoffel()
    n = f.n
    y = [Polynomial.variable(y_name(i + 1, 1)) for i in range(n)]
    contracted = [
        sum((symbols[i][p][m] * y[p] * y[m] for p in range(n) for m in range(n)), Polynomial())
        for i in range(n)
    ]
    return tuple(
        tuple(contracted[i].frac_partial(y_name(j + 1, 1), f.alpha) * 0.5 for j in range(n))
        for i in range(n)
    )


def prolong_finsler(f, k, scheme=None):
    """ Dual coefficients of the prolonged Finsler structure """
    return riemann_ladder(cartan_coefficients(f), f.alpha, f.n, k, scheme)


def lagrange_spray_components(lag):
    """
    G^i of a first-order Lagrangian.

    ``half``: 1/2 g^im ((D_{y^m} D_{x^j} L) y^j - D_{x^m} L) with g_im = D_{y^i} D_{y^m} L.
    ``literal``: -g^im D_{x^m} L.
    """
    if lag.k != 1:
        raise DomainError("Lagrange prolongation starts from a first-order Lagrangian")
    reading = convention("lagrange_spray", "half")
    if reading not in ("half", "literal"):
        raise ConfigError("unknown Lagrange spray convention '{0}'".format(reading))
    n, alpha = lag.n, lag.alpha
    xs = [y_name(i + 1, 0) for i in range(n)]
    ys = [y_name(i + 1, 1) for i in range(n)]
    g = tuple(
        tuple(lag.L.frac_partial(ys[m], alpha).frac_partial(ys[i], alpha) for m in range(n))
        for i in range(n)
    )
    inverse = symbolic_inverse(g)
    bracket = []
    for m in range(n):
        value = -lag.L.frac_partial(xs[m], alpha)
        if reading == "half":
            for j in range(n):
                mixed = lag.L.frac_partial(xs[j], alpha).frac_partial(ys[m], alpha)
                value = value + mixed * Polynomial.variable(ys[j])
        bracket.append(value)
    scale = 0.5 if reading == "half" else 1.0
    return tuple(
        sum((inverse[i][m] * bracket[m] for m in range(n)), Polynomial()) * scale
        for i in range(n)
    )


def prolong_lagrange(lag, k, scheme=None):
    """
    Dual coefficients from a first-order Lagrangian: M^(alpha)^i_j = D^alpha_{y^j(alpha)} G^i,
    higher orders by the ladder.

    :type lag: FracLagrangian
    """
    G = lagrange_spray_components(lag)
    first = tuple(
        tuple(G[i].frac_partial(y_name(j + 1, 1), lag.alpha) for j in range(lag.n))
        for i in range(lag.n)
    )
    return riemann_ladder(first, lag.alpha, lag.n, k, scheme)


def lagrangian_of_metric(r):
    """ First-order Lagrangian g_ij(x) y^i y^j of a Riemann structure """
    ys = [Polynomial.variable(y_name(i + 1, 1)) for i in range(r.n)]
    L = sum((r.g[i][j] * ys[i] * ys[j] for i in range(r.n) for j in range(r.n)), Polynomial())
    return FracLagrangian(r.n, 1, r.alpha, L)
