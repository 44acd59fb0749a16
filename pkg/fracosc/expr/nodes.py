"""
Expression trees over chart and jet variables.

Variables are named ``t``, ``x<i>`` for chart coordinates and ``y<i>_<a>``
for the jet coordinate y^{i(alpha a)}; indices start at 1.
"""
import re
from dataclasses import dataclass

import numpy as np

from ..exceptions import (
    EvaluationError, DivisionByZero, UnsupportedFormError, UnknownIdentifierError
)
from .. import specfun


VARIABLE_PATTERN = re.compile(r"^(t|x([1-9][0-9]*)|y([1-9][0-9]*)_([1-9][0-9]*))$")

FUNCTION_ARITY = {
    "gamma": 1,
    "ml": 2,
}


def x_name(i):
    """ Name of the i-th chart coordinate, 1-based """
    return "x{0}".format(i)


def y_name(i, a):
    """ Name of y^{i(alpha a)}, 1-based in both indices; a = 0 gives x_i """
    if a == 0:
        return x_name(i)
    return "y{0}_{1}".format(i, a)


def split_name(name):
    """
    Returns ``(i, a)`` for ``x<i>`` (a = 0) and ``y<i>_<a>``, ``None`` for ``t``.
    """
    match = VARIABLE_PATTERN.match(name)
    if not match:
        raise UnknownIdentifierError("unknown identifier '{0}'".format(name))
    if match.group(2):
        return int(match.group(2)), 0
    if match.group(3):
        return int(match.group(3)), int(match.group(4))
    return None


class Expr:
    """ Base of all expression nodes """

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: float


@dataclass(frozen=True)
class Call(Expr):
    name: str
    args: tuple


PRECEDENCE = {
    "+": 1,
    "-": 1,
    "*": 2,
    "/": 2,
}
_NEG_PRECEDENCE = 3
_POW_PRECEDENCE = 4
_ATOM_PRECEDENCE = 5


def number_text(value):
    value = float(value)
    if value.is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def _precedence(e):
    if isinstance(e, BinOp):
        return PRECEDENCE[e.op]
    if isinstance(e, Neg):
        return _NEG_PRECEDENCE
    if isinstance(e, Pow):
        return _POW_PRECEDENCE
    if isinstance(e, Num) and e.value < 0:
        return _NEG_PRECEDENCE
    return _ATOM_PRECEDENCE


def _wrap(e, parenthesize):
    text = to_text(e)
    return "(" + text + ")" if parenthesize else text


def to_text(e):
    """
    Canonical text of an expression; parsing it back yields the same tree.
    """
    if isinstance(e, Num):
        return number_text(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return "-" + _wrap(e.operand, _precedence(e.operand) < _NEG_PRECEDENCE)
    if isinstance(e, BinOp):
        p = PRECEDENCE[e.op]
        left = _wrap(e.left, _precedence(e.left) < p)
        right = _wrap(e.right, _precedence(e.right) <= p)
        if e.op in "+-":
            return "{0} {1} {2}".format(left, e.op, right)
        return "{0}{1}{2}".format(left, e.op, right)
    if isinstance(e, Pow):
        return "{0}^{1}".format(
            _wrap(e.base, _precedence(e.base) < _ATOM_PRECEDENCE),
            number_text(e.exponent)
        )
    if isinstance(e, Call):
        return "{0}({1})".format(e.name, ", ".join(to_text(a) for a in e.args))
    raise TypeError("not an expression: {0!r}".format(e))


def free_variables(e):
    """ Set of variable names occurring in ``e`` """
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Num):
        return set()
    if isinstance(e, Neg):
        return free_variables(e.operand)
    if isinstance(e, BinOp):
        return free_variables(e.left) | free_variables(e.right)
    if isinstance(e, Pow):
        return free_variables(e.base)
    if isinstance(e, Call):
        names = set()
        for a in e.args:
            names |= free_variables(a)
        return names
    raise TypeError("not an expression: {0!r}".format(e))


def check_variables(e, n, k=0, allow_t=False):
    """
    Verifies every variable of ``e`` fits a chart of dimension ``n`` and
    jets up to order ``k``.

    :raises UnknownIdentifierError: on the first offending name
    """
    for name in sorted(free_variables(e)):
        split = split_name(name)
        if split is None:
            if not allow_t:
                raise UnknownIdentifierError("variable t is not allowed here")
            continue
        i, a = split
        if i > n or a > k:
            raise UnknownIdentifierError(
                "variable '{0}' exceeds dimension n={1} or order k={2}".format(name, n, k))


def _evaluate(e, env):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        try:
            return env[e.name]
        except KeyError:
            raise EvaluationError("unbound variable '{0}'".format(e.name))
    if isinstance(e, Neg):
        return -_evaluate(e.operand, env)
    if isinstance(e, BinOp):
        left = _evaluate(e.left, env)
        right = _evaluate(e.right, env)
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        if e.op == "*":
            return left * right
        if np.any(np.asarray(right) == 0):
            raise DivisionByZero("division by zero in '{0}'".format(to_text(e)))
        return left / right
    if isinstance(e, Pow):
        base = _evaluate(e.base, env)
        if e.exponent < 0 and np.any(np.asarray(base) == 0):
            raise DivisionByZero("zero raised to a negative power in '{0}'".format(to_text(e)))
        if not float(e.exponent).is_integer() and np.any(np.asarray(base) < 0):
            raise EvaluationError("negative base with fractional exponent in '{0}'".format(to_text(e)))
        return np.power(base, e.exponent)
    if isinstance(e, Call):
        args = [_evaluate(a, env) for a in e.args]
        if e.name == "gamma":
            return specfun.gamma(args[0])
        if e.name == "ml":
            if np.ndim(args[0]) > 0:
                raise EvaluationError("the order of ml() must be a constant")
            return specfun.mittag_leffler(float(args[0]), args[1])
    raise EvaluationError("cannot evaluate {0!r}".format(e))


def evaluate(e, env):
    """
    Evaluates ``e`` with variables bound by ``env``; values may be numpy arrays.

    :raises EvaluationError: unbound variables or non-finite results
    :raises DivisionByZero: division by zero
    :raises PoleError: Gamma evaluated at a pole
    """
    with np.errstate(all="ignore"):
        value = _evaluate(e, env)
    if not np.all(np.isfinite(value)):
        raise EvaluationError("'{0}' is not finite at the given point".format(to_text(e)))
    if np.ndim(value) == 0:
        return float(value)
    return value


# constructors with light constant folding

def add(a, b):
    if isinstance(a, Num) and a.value == 0:
        return b
    if isinstance(b, Num) and b.value == 0:
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value + b.value)
    return BinOp("+", a, b)


def sub(a, b):
    if isinstance(b, Num) and b.value == 0:
        return a
    if isinstance(a, Num) and a.value == 0:
        return neg(b)
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value - b.value)
    return BinOp("-", a, b)


def neg(a):
    if isinstance(a, Num):
        return Num(-a.value)
    if isinstance(a, Neg):
        return a.operand
    return Neg(a)


def mul(a, b):
    for x, y in ((a, b), (b, a)):
        if isinstance(x, Num):
            if x.value == 0:
                return Num(0.0)
            if x.value == 1:
                return y
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value * b.value)
    return BinOp("*", a, b)


def div(a, b):
    if isinstance(b, Num) and b.value == 1:
        return a
    if isinstance(a, Num) and a.value == 0:
        return Num(0.0)
    return BinOp("/", a, b)


def power(base, exponent):
    if exponent == 0:
        return Num(1.0)
    if exponent == 1:
        return base
    if isinstance(base, Num) and (base.value > 0 or float(exponent).is_integer()):
        return Num(base.value ** exponent)
    return Pow(base, float(exponent))


def is_constant(e):
    return not free_variables(e)


def differentiate(e, var):
    """
    Classical symbolic partial derivative of ``e`` with respect to ``var``.

    :raises UnsupportedFormError: for gamma() or ml() of ``var``
    """
    if isinstance(e, Num):
        return Num(0.0)
    if isinstance(e, Var):
        return Num(1.0) if e.name == var else Num(0.0)
    if isinstance(e, Neg):
        return neg(differentiate(e.operand, var))
    if isinstance(e, BinOp):
        dl = differentiate(e.left, var)
        dr = differentiate(e.right, var)
        if e.op == "+":
            return add(dl, dr)
        if e.op == "-":
            return sub(dl, dr)
        if e.op == "*":
            return add(mul(dl, e.right), mul(e.left, dr))
        return div(sub(mul(dl, e.right), mul(e.left, dr)), power(e.right, 2))
    if isinstance(e, Pow):
        db = differentiate(e.base, var)
        if isinstance(db, Num) and db.value == 0:
            return Num(0.0)
        return mul(mul(Num(e.exponent), power(e.base, e.exponent - 1)), db)
    if isinstance(e, Call):
        if var not in free_variables(e):
            return Num(0.0)
        raise UnsupportedFormError(
            "{0}() of '{1}' has no symbolic derivative".format(e.name, var))
    raise TypeError("not an expression: {0!r}".format(e))


def substitute(e, mapping):
    """ Replaces variables by expressions, ``mapping`` maps names to Expr """
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if isinstance(e, Num):
        return e
    if isinstance(e, Neg):
        return Neg(substitute(e.operand, mapping))
    if isinstance(e, BinOp):
        return BinOp(e.op, substitute(e.left, mapping), substitute(e.right, mapping))
    if isinstance(e, Pow):
        return Pow(substitute(e.base, mapping), e.exponent)
    if isinstance(e, Call):
        return Call(e.name, tuple(substitute(a, mapping) for a in e.args))
    raise TypeError("not an expression: {0!r}".format(e))
