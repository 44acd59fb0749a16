"""
Numerical fractional differentiation on uniform grids, the
integration-by-parts check and a predictor-corrector solver for
D^alpha x = X(t, x).
"""
import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from . import Config
from .exceptions import DomainError, SolverError, FracOscException
from .expr import parse, evaluate as evaluate_expr, check_variables, x_name, y_name
from .fracseries import jet_lift, frac_derive_iterated, evaluate as evaluate_series
from .specfun import gamma


class Side(enum.Enum):
    """Side of a fractional derivative."""

    #: lower limit at the grid start
    Left = enum.auto()
    #: upper limit at the grid end
    Right = enum.auto()


def _check_order(alpha):
    if not 0 < alpha < 1:
        raise DomainError("numerical schemes need an order in (0, 1), got {0}".format(alpha))


@dataclass
class SampledFunction:
    """
    Samples of a function at a, a + h, a + 2h, ...

    :param a: grid start
    :param h: spacing
    :param values: samples
    """
    a: float
    h: float
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if not self.h > 0:
            raise DomainError("grid spacing must be positive")
        if self.values.ndim != 1 or len(self.values) < 2:
            raise DomainError("at least two samples are needed")

    @classmethod
    def from_function(cls, func, a, b, h):
        """ Samples ``func`` on [a, b] with spacing h """
        count = int(round((b - a) / h)) + 1
        grid = a + h * np.arange(count)
        return cls(a, h, func(grid))

    @property
    def grid(self):
        return self.a + self.h * np.arange(len(self.values))

    @property
    def b(self):
        return self.a + self.h * (len(self.values) - 1)

    def same_grid(self, other):
        return (len(self.values) == len(other.values)
                and np.isclose(self.a, other.a) and np.isclose(self.h, other.h))


def gl_weights(alpha, count):
    """ w_0 = 1, w_k = w_{k-1} (1 - (alpha + 1) / k) """
    k = np.arange(1, count)
    return np.concatenate(([1.0], np.cumprod(1.0 - (alpha + 1.0) / k)))


def _left_gl(values, alpha, h):
    shifted = values - values[0]
    weights = gl_weights(alpha, len(values))
    out = np.convolve(shifted, weights)[:len(values)] * h ** (-alpha)
    out[0] = 0.0
    return out


def _left_l1(values, alpha, h):
    differences = np.diff(values)
    j = np.arange(len(differences), dtype=float)
    b = (j + 1.0) ** (1.0 - alpha) - j ** (1.0 - alpha)
    out = np.zeros_like(values)
    out[1:] = np.convolve(differences, b)[:len(differences)]
    return out * h ** (-alpha) / gamma(2.0 - alpha)


def _sided(scheme, f, alpha, side):
    if side == Side.Left:
        return SampledFunction(f.a, f.h, scheme(f.values, alpha, f.h))
    mirrored = scheme(f.values[::-1], alpha, f.h)
    return SampledFunction(f.a, f.h, mirrored[::-1])


def gl_derivative(f, alpha, side=Side.Left):
    """
    Grünwald-Letnikov approximation of the modified Riemann-Liouville derivative.

    The left derivative is applied to f - f(a) and vanishes at the first
    node; the right derivative mirrors the grid and subtracts f(b).

    :param f: samples
    :type f: SampledFunction
    :param alpha: order in (0, 1)
    :param side: Side.Left or Side.Right
    :rtype: SampledFunction
    """
    _check_order(alpha)
    return _sided(_left_gl, f, alpha, side)


def l1_derivative(f, alpha, side=Side.Left):
    """
    L1 product-integration approximation of the same derivative, order 2 - alpha.
    """
    _check_order(alpha)
    return _sided(_left_l1, f, alpha, side)


def trapezoid(values, h):
    return h * (np.sum(values) - 0.5 * (values[0] + values[-1]))


def integration_by_parts_residual(f1, f2, alpha):
    """
    |int f1 D^alpha f2 - int f2 D_right^alpha f1| over the common grid.

    The right derivative here is the mirrored one, which carries the sign of
    the classical -d/dt, so the identity for functions vanishing at both
    ends reads int f1 D f2 = int f2 D_right f1.
    """
    if not f1.same_grid(f2):
        raise DomainError("integration by parts needs both functions on one grid")
    left = gl_derivative(f2, alpha, Side.Left).values
    right = gl_derivative(f1, alpha, Side.Right).values
    return abs(trapezoid(f1.values * left, f1.h) - trapezoid(f2.values * right, f1.h))


def convergence_order(errors, steps):
    """ Least-squares slope of log(error) against log(step) """
    slope, _ = np.polyfit(np.log(np.asarray(steps, dtype=float)),
                          np.log(np.asarray(errors, dtype=float)), 1)
    return float(slope)


@dataclass
class FodeProblem:
    """
    Initial value problem D^alpha x^i = X^i(t, x), x(0) = x0.

    :param alpha: order in (0, 1)
    :param rhs: one expression per coordinate over t, x1..xn
    :param x0: initial state
    :param t_end: final time
    :param h: step
    """
    alpha: float
    rhs: list
    x0: list
    t_end: float
    h: float

    def __post_init__(self):
        _check_order(self.alpha)
        if not self.h > 0 or not self.t_end > 0:
            raise DomainError("step and final time must be positive")
        self.rhs = [parse(e) if isinstance(e, str) else e for e in self.rhs]
        self.x0 = np.asarray(self.x0, dtype=float).reshape(-1)
        if len(self.rhs) != len(self.x0):
            raise DomainError("{0} right-hand sides for a state of dimension {1}".format(
                len(self.rhs), len(self.x0)))
        for e in self.rhs:
            check_variables(e, len(self.x0), 0, allow_t=True)

    @property
    def n(self):
        return len(self.x0)

    def evaluate_rhs(self, t, x):
        env = {x_name(i + 1): x[i] for i in range(self.n)}
        env["t"] = t
        return np.array([evaluate_expr(e, env) for e in self.rhs], dtype=float)


@dataclass
class Trajectory:
    t: np.ndarray
    x: np.ndarray = field(repr=False)

    @property
    def final(self):
        return self.x[-1]


def solve_fode(p):
    """
    Fractional Adams-Bashforth-Moulton predictor-corrector.

    The modified derivative subtracts x(0), so the Caputo form of the
    scheme applies. No Lipschitz check is made on the right-hand side.

    :type p: FodeProblem
    :rtype: Trajectory
    :raises SolverError: when the right-hand side fails, with the last good node
    """
    steps = int(round(p.t_end / p.h))
    alpha = p.alpha
    h = p.h
    t = h * np.arange(steps + 1)
    x = np.zeros((steps + 1, p.n))
    f = np.zeros((steps + 1, p.n))
    x[0] = p.x0

    predictor_scale = h ** alpha / gamma(alpha + 1.0)
    corrector_scale = h ** alpha / gamma(alpha + 2.0)
    powers = np.arange(steps + 2, dtype=float)
    power_alpha = powers ** alpha
    power_alpha1 = powers ** (alpha + 1.0)

    def rhs(node, state):
        last = max(node - 1, 0)
        try:
            value = p.evaluate_rhs(t[node], state)
        except FracOscException as e:
            raise SolverError("right-hand side failed: {0}".format(e),
                              node=last, t=t[last], state=x[last].tolist())
        if not np.all(np.isfinite(value)):
            raise SolverError("right-hand side is not finite",
                              node=last, t=t[last], state=x[last].tolist())
        return value

    f[0] = rhs(0, x[0])
    for n in range(steps):
        j = np.arange(n + 1)
        # predictor weights b_{j,n+1}
        b = power_alpha[n + 1 - j] - power_alpha[n - j]
        predicted = p.x0 + predictor_scale * (b @ f[:n + 1])

        # corrector weights a_{j,n+1}
        a = np.empty(n + 1)
        a[0] = power_alpha1[n] - (n - alpha) * power_alpha[n + 1]
        if n > 0:
            jj = j[1:]
            a[1:] = power_alpha1[n - jj + 2] + power_alpha1[n - jj] - 2.0 * power_alpha1[n - jj + 1]
        x[n + 1] = p.x0 + corrector_scale * (rhs(n + 1, predicted) + a @ f[:n + 1])
        f[n + 1] = rhs(n + 1, x[n + 1])

    logging.getLogger(__name__).debug(
        "solved D^{0} x = X on {1} steps, final state {2}".format(alpha, steps, x[-1].tolist()))
    return Trajectory(t, x)


def residual_nodes(count=None):
    """ Uniform nodes on (0, 1]; t = 0 is left out since jet powers may be negative there """
    if count is None:
        count = int(Config.get("numerics", "residual_nodes", 33))
    return np.linspace(0.0, 1.0, count + 1)[1:]


def spray_ode_residual(spray, curve, nodes=None):
    """
    Largest residual of D^(alpha(k+1)) x / Gamma(1 + alpha k) + G(jet lift of x) = 0
    along a curve given exactly as series.

    :param spray: spray whose components G^i are evaluated
    :type spray: fracosc.oscbundle.FracSpray
    :param curve: one series per coordinate
    :type curve: list of FracSeries
    :param nodes: sample times, defaults to :func:`residual_nodes`
    """
    if nodes is None:
        nodes = residual_nodes()
    if len(curve) != spray.n:
        raise DomainError("curve has {0} coordinates, spray expects {1}".format(len(curve), spray.n))
    k = spray.k
    rows = jet_lift(curve, spray.alpha, k)
    top = [frac_derive_iterated(x, spray.alpha, k + 1) for x in curve]
    env = {}
    for a, row in enumerate(rows):
        for i, series in enumerate(row):
            env[y_name(i + 1, a)] = evaluate_series(series, nodes)
    scale = 1.0 / gamma(1.0 + spray.alpha * k)
    worst = 0.0
    for i in range(spray.n):
        residual = scale * evaluate_series(top[i], nodes) + spray.G[i].evaluate(env)
        worst = max(worst, float(np.max(np.abs(residual))))
    return worst
