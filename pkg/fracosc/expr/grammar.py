"""
Parser for the expression language::

    expr     ::= term (('+' | '-') term)*
    term     ::= unary (('*' | '/') unary)*
    unary    ::= '-' unary | power
    power    ::= atom ('^' exponent)?
    exponent ::= signed_number | '(' signed_number ')'
    atom     ::= number | call | variable | '(' expr ')'
    call     ::= name '(' expr (',' expr)* ')'
    variable ::= 't' | 'x' index | 'y' index '_' index

Power binds tighter than unary minus, binary operators associate to the
left and exponents are numeric literals.
"""
import pyparsing as pp

from ..exceptions import ExprSyntaxError, UnknownIdentifierError, ArityError
from .nodes import Num, Var, Neg, BinOp, Pow, Call, FUNCTION_ARITY, split_name


def _fold_binary(tokens):
    items = tokens[0]
    node = items[0]
    for i in range(1, len(items), 2):
        node = BinOp(items[i], node, items[i + 1])
    return node


def _build_grammar():
    number = pp.Regex(r"(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?")
    number.setParseAction(lambda t: Num(float(t[0])))
    number.setName("number")

    signed_number = pp.Regex(r"[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?")
    signed_number.setParseAction(lambda t: float(t[0]))
    signed_number.setName("numeric exponent")

    name = pp.Word(pp.alphas, pp.alphanums + "_")
    name.setName("identifier")

    lpar = pp.Suppress("(")
    rpar = pp.Suppress(")")

    expr = pp.Forward()
    expr.setName("expression")

    call = pp.Group(name + lpar - pp.Group(pp.Optional(pp.delimitedList(expr))) + rpar)
    call.setParseAction(lambda t: Call(t[0][0], tuple(t[0][1])))
    call.setName("function call")

    variable = name.copy()
    variable.setParseAction(lambda t: Var(t[0]))

    atom = number | call | variable | (lpar - expr + rpar)
    atom.setName("operand")

    exponent = signed_number | (lpar + signed_number + rpar)
    power = pp.Group(atom + pp.Optional(pp.Suppress("^") - exponent))
    power.setParseAction(lambda t: Pow(t[0][0], t[0][1]) if len(t[0]) > 1 else t[0][0])

    unary = pp.Forward()
    unary <<= (pp.Suppress("-") + unary).setParseAction(lambda t: Neg(t[0])) | power
    unary.setName("operand")

    term = pp.Group(unary + pp.ZeroOrMore(pp.oneOf("* /") - unary))
    term.setParseAction(_fold_binary)

    expr <<= pp.Group(term + pp.ZeroOrMore(pp.oneOf("+ -") - term)).setParseAction(_fold_binary)

    return expr + pp.StringEnd()


_GRAMMAR = _build_grammar()


def _validate(e):
    if isinstance(e, Var):
        split_name(e.name)
    elif isinstance(e, Neg):
        _validate(e.operand)
    elif isinstance(e, BinOp):
        _validate(e.left)
        _validate(e.right)
    elif isinstance(e, Pow):
        _validate(e.base)
    elif isinstance(e, Call):
        if e.name not in FUNCTION_ARITY:
            raise UnknownIdentifierError("unknown function '{0}'".format(e.name))
        if len(e.args) != FUNCTION_ARITY[e.name]:
            raise ArityError("{0}() takes {1} argument(s), got {2}".format(
                e.name, FUNCTION_ARITY[e.name], len(e.args)))
        for a in e.args:
            _validate(a)


def parse(source):
    """
    Parses expression text into a tree.

    :param source: expression text
    :type source: str
    :raises ExprSyntaxError: with line, column and the expected token
    :raises UnknownIdentifierError: for names outside t, x<i>, y<i>_<a>, gamma, ml
    :raises ArityError: for gamma/ml with the wrong number of arguments
    """
    try:
        e = _GRAMMAR.parseString(source, parseAll=True)[0]
    except pp.ParseBaseException as error:
        raise ExprSyntaxError(
            "cannot parse '{0}'".format(source),
            line=error.lineno,
            column=error.col,
            expected=getattr(error.parserElement, "name", None) if hasattr(error, "parserElement") else None
        )
    _validate(e)
    return e
