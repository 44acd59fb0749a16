"""
The monomial fragment: finite sums of c * prod_v v^p with real powers p.

This is the carrier on which fractional partials are exact. Fields of the
bundle (metrics, sprays, connection coefficients) are kept in this form.
"""
import math

import numpy as np

from ..exceptions import UnsupportedFormError, PoleError, EvaluationError, DivisionByZero
from .. import Config
from .. import specfun
from .nodes import Num, Var, Neg, BinOp, Pow, Call


def _digits():
    tolerance = float(Config.get("numerics", "exponent_tolerance", 1e-9))
    return max(0, int(round(-math.log10(tolerance))))


def _monomial(powers, digits):
    """ Canonical monomial key: sorted ((name, power), ...) without zero powers """
    merged = {}
    for name, p in powers:
        merged[name] = merged.get(name, 0.0) + p
    key = []
    for name in sorted(merged):
        p = round(merged[name], digits)
        if p != 0.0:
            key.append((name, p))
    return tuple(key)


class Polynomial:
    """
    Sum of monomials with real exponents.

    ``terms`` maps a monomial key, a sorted tuple of ``(variable, power)``
    pairs, to its coefficient. Negative and fractional powers are allowed.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        digits = _digits()
        normalized = {}
        for monomial, coefficient in (terms or {}).items():
            key = _monomial(monomial, digits)
            normalized[key] = normalized.get(key, 0.0) + float(coefficient)
        self.terms = {m: c for m, c in normalized.items() if c != 0.0}

    @classmethod
    def constant(cls, value):
        return cls({(): value})

    @classmethod
    def variable(cls, name, exponent=1.0):
        return cls({((name, exponent),): 1.0})

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def from_expr(cls, e):
        """
        Normalizes an expression into the fragment.

        Products are distributed over sums, integer powers of sums are
        expanded, real powers are allowed on single terms, division only by
        single terms, and gamma()/ml() only of constants.

        :raises UnsupportedFormError: when ``e`` has no such normal form
        """
        if isinstance(e, Polynomial):
            return e
        if isinstance(e, str):
            from .grammar import parse
            e = parse(e)
        if isinstance(e, (int, float)):
            return cls.constant(e)
        if isinstance(e, Num):
            return cls.constant(e.value)
        if isinstance(e, Var):
            return cls.variable(e.name)
        if isinstance(e, Neg):
            return -cls.from_expr(e.operand)
        if isinstance(e, BinOp):
            left = cls.from_expr(e.left)
            right = cls.from_expr(e.right)
            if e.op == "+":
                return left + right
            if e.op == "-":
                return left - right
            if e.op == "*":
                return left * right
            return left / right
        if isinstance(e, Pow):
            return cls.from_expr(e.base).power(e.exponent)
        if isinstance(e, Call):
            args = [cls.from_expr(a) for a in e.args]
            if not all(a.is_constant() for a in args):
                raise UnsupportedFormError(
                    "{0}() of a variable is outside the monomial fragment".format(e.name))
            values = [a.constant_value() for a in args]
            if e.name == "gamma":
                return cls.constant(specfun.gamma(values[0]))
            return cls.constant(specfun.mittag_leffler(values[0], values[1]))
        raise UnsupportedFormError("cannot normalize {0!r}".format(e))

    # algebra

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, float, np.floating)):
            return Polynomial.constant(float(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0.0) + c
        return Polynomial(terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                key = m1 + m2
                terms[key] = terms.get(key, 0.0) + c1 * c2
        # keys are re-canonicalized in the constructor
        return Polynomial._from_raw(terms)

    __rmul__ = __mul__

    @classmethod
    def _from_raw(cls, terms):
        digits = _digits()
        normalized = {}
        for monomial, coefficient in terms.items():
            key = _monomial(monomial, digits)
            normalized[key] = normalized.get(key, 0.0) + coefficient
        p = cls.__new__(cls)
        p.terms = {m: c for m, c in normalized.items() if c != 0.0}
        return p

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.power(-1.0)

    def power(self, exponent):
        """
        Raises to a real power: any power of a single term, non-negative
        integer powers of sums.
        """
        exponent = float(exponent)
        if exponent == 0.0:
            return Polynomial.constant(1.0)
        if len(self.terms) == 1:
            (monomial, coefficient), = self.terms.items()
            if coefficient < 0 and not exponent.is_integer():
                raise UnsupportedFormError("fractional power of a negative coefficient")
            if coefficient == 0 and exponent < 0:
                raise DivisionByZero("zero raised to a negative power")
            return Polynomial({tuple((v, p * exponent) for v, p in monomial): coefficient ** exponent})
        if not self.terms:
            if exponent < 0:
                raise DivisionByZero("zero raised to a negative power")
            return Polynomial()
        if exponent.is_integer() and exponent > 0:
            result = Polynomial.constant(1.0)
            for _ in range(int(exponent)):
                result = result * self
            return result
        raise UnsupportedFormError(
            "power {0} of a sum is outside the monomial fragment".format(exponent))

    # inspection

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(m == () for m in self.terms)

    def is_monomial(self):
        return len(self.terms) <= 1

    def constant_value(self):
        return self.terms.get((), 0.0)

    def variables(self):
        return {v for m in self.terms for v, _ in m}

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def max_abs_difference(self, other):
        """ Largest coefficient of ``self - other`` in absolute value """
        difference = self - other
        return max((abs(c) for c in difference.terms.values()), default=0.0)

    # calculus

    def frac_partial(self, var, alpha):
        """
        Fractional partial with respect to ``var``: the power rule per term,
        terms free of ``var`` are annihilated. alpha = 1 gives the classical
        partial.

        :raises PoleError: when Gamma(1 + p) hits a pole for a power p of ``var``
        """
        if alpha == 1:
            return self.classical_partial(var)
        terms = {}
        for monomial, coefficient in self.terms.items():
            powers = dict(monomial)
            if var not in powers:
                continue
            p = powers[var]
            if specfun.is_pole(1.0 + p):
                raise PoleError(1.0 + p, "power rule for {0}^{1} hits the Gamma pole at {2}".format(
                    var, p, 1.0 + p))
            factor = specfun.gamma_ratio(1.0 + p, 1.0 + p - alpha)
            if factor == 0.0:
                continue
            powers[var] = p - alpha
            key = tuple(powers.items())
            terms[key] = terms.get(key, 0.0) + coefficient * factor
        return Polynomial._from_raw(terms)

    def classical_partial(self, var):
        terms = {}
        for monomial, coefficient in self.terms.items():
            powers = dict(monomial)
            p = powers.get(var, 0.0)
            if p == 0.0:
                continue
            powers[var] = p - 1.0
            key = tuple(powers.items())
            terms[key] = terms.get(key, 0.0) + coefficient * p
        return Polynomial._from_raw(terms)

    def partial(self, var, alpha, fractional=True):
        if fractional:
            return self.frac_partial(var, alpha)
        return self.classical_partial(var)

    # evaluation and conversion

    def evaluate(self, env):
        """
        Value at a point; ``env`` maps names to scalars or equally shaped arrays.

        :raises EvaluationError: for unbound variables or non-finite values
        """
        total = 0.0
        with np.errstate(all="ignore"):
            for monomial, coefficient in self.terms.items():
                value = coefficient
                for name, p in monomial:
                    try:
                        base = env[name]
                    except KeyError:
                        raise EvaluationError("unbound variable '{0}'".format(name))
                    value = value * np.power(base, p)
                total = total + value
        if not np.all(np.isfinite(total)):
            raise EvaluationError("'{0}' is not finite at the given point".format(self))
        if np.ndim(total) == 0:
            return float(total)
        return total

    def to_expr(self):
        """ Expression tree with terms in canonical order """
        result = None
        for monomial in sorted(self.terms):
            coefficient = self.terms[monomial]
            factors = None
            for name, p in monomial:
                factor = Var(name) if p == 1.0 else Pow(Var(name), p)
                factors = factor if factors is None else BinOp("*", factors, factor)
            magnitude = abs(coefficient)
            if factors is None:
                term = Num(magnitude)
            elif magnitude == 1.0:
                term = factors
            else:
                term = BinOp("*", Num(magnitude), factors)
            if result is None:
                result = term if coefficient > 0 else Neg(term)
            elif coefficient > 0:
                result = BinOp("+", result, term)
            else:
                result = BinOp("-", result, term)
        return result if result is not None else Num(0.0)

    def __str__(self):
        from .nodes import to_text
        return to_text(self.to_expr())

    __repr__ = __str__


def as_polynomial(value):
    """ Accepts text, an expression, a number or a polynomial """
    if isinstance(value, Polynomial):
        return value
    return Polynomial.from_expr(value)


def poly_matrix(rows):
    """ Nested lists of anything ``as_polynomial`` accepts, as tuples of Polynomial """
    return tuple(tuple(as_polynomial(v) for v in row) for row in rows)


def zero_matrix(n):
    return tuple(tuple(Polynomial() for _ in range(n)) for _ in range(n))


def matmul(a, b):
    n = len(a)
    m = len(b[0])
    inner = len(b)
    return tuple(
        tuple(
            sum((a[i][s] * b[s][j] for s in range(inner)), Polynomial())
            for j in range(m)
        )
        for i in range(n)
    )


def matadd(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def matsub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def matscale(a, factor):
    return tuple(tuple(x * factor for x in row) for row in a)


def matrix_at(a, env):
    """ Numeric value of a polynomial matrix at a point """
    return np.array([[entry.evaluate(env) for entry in row] for row in a], dtype=float)


def matrix_difference(a, b):
    """ Largest coefficient difference over all entries """
    return max(
        (x.max_abs_difference(y) for ra, rb in zip(a, b) for x, y in zip(ra, rb)),
        default=0.0
    )


def symbolic_inverse(g):
    """
    Inverse of a constant matrix or of a diagonal matrix of single terms.

    :raises RankError: for a singular matrix
    :raises UnsupportedFormError: for any other shape
    """
    from ..exceptions import RankError

    n = len(g)
    if all(entry.is_constant() for row in g for entry in row):
        values = np.array([[entry.constant_value() for entry in row] for row in g])
        if np.linalg.matrix_rank(values) < n:
            raise RankError("matrix {0} is singular (rank {1} < {2})".format(
                values.tolist(), np.linalg.matrix_rank(values), n))
        inverse = np.linalg.inv(values)
        return tuple(tuple(Polynomial.constant(inverse[i, j]) for j in range(n)) for i in range(n))
    for i in range(n):
        for j in range(n):
            if i != j and not g[i][j].is_zero():
                raise UnsupportedFormError(
                    "symbolic inverse needs a constant or diagonal matrix, entry ({0},{1}) is {2}".format(
                        i + 1, j + 1, g[i][j]))
    diagonal = []
    for i in range(n):
        if g[i][i].is_zero():
            raise RankError("diagonal entry {0} vanishes, the matrix is singular".format(i + 1))
        if not g[i][i].is_monomial():
            raise UnsupportedFormError(
                "diagonal entry {0} = {1} is not a single term".format(i + 1, g[i][i]))
        diagonal.append(g[i][i].power(-1.0))
    return tuple(
        tuple(diagonal[i] if i == j else Polynomial() for j in range(n)) for i in range(n)
    )
