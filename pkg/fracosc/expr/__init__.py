from .nodes import (
    Expr, Num, Var, Neg, BinOp, Pow, Call,
    to_text, evaluate, differentiate, substitute, free_variables,
    check_variables, split_name, x_name, y_name, is_constant
)
from .grammar import parse
from .polynomial import (
    Polynomial, as_polynomial, poly_matrix, zero_matrix, matmul, matadd,
    matsub, matscale, matrix_at, matrix_difference, symbolic_inverse
)


def frac_partial(e, var, alpha):
    """
    Exact fractional partial of an expression on the monomial fragment.

    Other variables are treated as constants and terms free of ``var`` map
    to zero. Expressions outside the fragment raise
    :class:`~fracosc.exceptions.UnsupportedFormError`; sample them and use
    :func:`fracosc.fracnum.gl_derivative` along the ``var`` axis instead.

    :param e: expression
    :type e: Expr or str
    :param var: variable name
    :param alpha: order in (0, 1]
    :rtype: Expr
    """
    return Polynomial.from_expr(e).frac_partial(var, alpha).to_expr()


def classical_partial(e, var):
    return Polynomial.from_expr(e).classical_partial(var).to_expr()
