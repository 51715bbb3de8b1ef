"""Tiny expression language for problem descriptions.

Coefficient functions, forcings and nonlinear terms are written as strings in
the variables x, p, dp, d2p, q, dq, d2q (dp means p', d2p means p'').  Grammar,
in order of increasing precedence:

    expr    :=  term (('+' | '-') term)*
    term    :=  factor (('*' | '/') factor)*
    factor  :=  '-' factor | power
    power   :=  primary ('^' ['-'] number)?
    primary :=  number | variable | function '(' expr ')' | '(' expr ')'

Functions: exp, sin, cos, ln, sqrt.  Whitespace is insignificant.  Exponents
must be numeric literals, so -x^2 means -(x^2) and polynomial sources stay
polynomials; small integer exponents are evaluated by repeated multiplication
for exactness.
"""

import math
import re
from dataclasses import dataclass
from typing import Union

from .errors import ExprEvalError, ExprSyntaxError

VARIABLES = ("x", "p", "dp", "d2p", "q", "dq", "d2q")
FUNCTIONS = ("exp", "sin", "cos", "ln", "sqrt")

# exponents up to this size are expanded as repeated multiplication
_POW_UNROLL = 16


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: float


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Var, Neg, BinOp, Pow, Call]


@dataclass(frozen=True)
class PointState:
    """Values of the seven variables at one abscissa."""

    x: float = 0.0
    p: float = 0.0
    dp: float = 0.0
    d2p: float = 0.0
    q: float = 0.0
    dq: float = 0.0
    d2q: float = 0.0


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(source):
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            stripped = source[pos:].lstrip()
            if not stripped:
                break
            at = len(source) - len(stripped)
            raise ExprSyntaxError(f"unexpected character {source[at]!r}", at)
        if m.lastgroup == "num":
            tokens.append(("num", m.group("num"), m.start("num")))
        elif m.lastgroup == "ident":
            tokens.append(("ident", m.group("ident"), m.start("ident")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source):
        self.source = source
        self.tokens = _tokenize(source)
        self.idx = 0

    def peek(self):
        return self.tokens[self.idx]

    def advance(self):
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expect_op(self, symbol):
        kind, text, pos = self.peek()
        if kind != "op" or text != symbol:
            raise ExprSyntaxError(f"expected {symbol!r}", pos)
        return self.advance()

    def at_op(self, *symbols):
        kind, text, _ = self.peek()
        return kind == "op" and text in symbols

    def parse(self):
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected trailing input {text!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.at_op("+", "-"):
            _, op, _ = self.advance()
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.at_op("*", "/"):
            _, op, _ = self.advance()
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        if self.at_op("-"):
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self):
        base = self.primary()
        if not self.at_op("^"):
            return base
        self.advance()
        sign = 1.0
        if self.at_op("-"):
            self.advance()
            sign = -1.0
        kind, text, pos = self.peek()
        if kind != "num":
            raise ExprSyntaxError("exponent must be a numeric literal", pos)
        self.advance()
        return Pow(base, sign * float(text))

    def primary(self):
        kind, text, pos = self.advance()
        if kind == "num":
            return Num(float(text))
        if kind == "ident":
            if text in VARIABLES:
                return Var(text)
            if text in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Call(text, arg)
            raise ExprSyntaxError(f"unknown identifier {text!r}", pos)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        shown = text if text else "end of input"
        raise ExprSyntaxError(f"unexpected {shown!r}", pos)


def parse(source):
    """Parse an expression string into an immutable AST."""
    return _Parser(source).parse()


def _pow(base, exponent, x):
    n = int(exponent)
    if exponent == n and abs(n) <= _POW_UNROLL:
        out = 1.0
        for _ in range(abs(n)):
            out *= base
        if n < 0:
            if out == 0.0:
                raise ExprEvalError("zero raised to a negative power", x)
            out = 1.0 / out
        return out
    try:
        return math.pow(base, exponent)
    except (ValueError, OverflowError) as err:
        raise ExprEvalError(f"{base} ^ {exponent}: {err}", x) from err


def evaluate(e, state):
    """Evaluate an AST at a PointState; arithmetic faults raise ExprEvalError."""
    x = state.x
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return getattr(state, e.name)
    if isinstance(e, Neg):
        return -evaluate(e.operand, state)
    if isinstance(e, Pow):
        return _pow(evaluate(e.base, state), e.exponent, x)
    if isinstance(e, Call):
        v = evaluate(e.arg, state)
        if e.func == "exp":
            try:
                return math.exp(v)
            except OverflowError as err:
                raise ExprEvalError(f"exp({v}) overflows", x) from err
        if e.func == "sin":
            return math.sin(v)
        if e.func == "cos":
            return math.cos(v)
        if e.func == "ln":
            if v <= 0.0:
                raise ExprEvalError(f"ln of non-positive value {v}", x)
            return math.log(v)
        if e.func == "sqrt":
            if v < 0.0:
                raise ExprEvalError(f"sqrt of negative value {v}", x)
            return math.sqrt(v)
        raise ExprEvalError(f"unknown function {e.func!r}", x)
    if isinstance(e, BinOp):
        lhs = evaluate(e.left, state)
        rhs = evaluate(e.right, state)
        if e.op == "+":
            return lhs + rhs
        if e.op == "-":
            return lhs - rhs
        if e.op == "*":
            return lhs * rhs
        if e.op == "/":
            if rhs == 0.0:
                raise ExprEvalError("division by zero", x)
            return lhs / rhs
        raise ExprEvalError(f"unknown operator {e.op!r}", x)
    raise TypeError(f"not an expression node: {e!r}")


def free_vars(e):
    """The set of variable names appearing in the AST."""
    if isinstance(e, Num):
        return frozenset()
    if isinstance(e, Var):
        return frozenset((e.name,))
    if isinstance(e, Neg):
        return free_vars(e.operand)
    if isinstance(e, Pow):
        return free_vars(e.base)
    if isinstance(e, Call):
        return free_vars(e.arg)
    if isinstance(e, BinOp):
        return free_vars(e.left) | free_vars(e.right)
    raise TypeError(f"not an expression node: {e!r}")


def _fmt_number(v):
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


# precedence levels used when printing: parenthesize a child whose level is
# lower than its context requires
_ADD, _MUL, _UNARY, _POW, _ATOM = 1, 2, 3, 4, 5


def _emit(e, ctx):
    if isinstance(e, Num):
        text, level = _fmt_number(e.value), _ATOM
    elif isinstance(e, Var):
        text, level = e.name, _ATOM
    elif isinstance(e, Call):
        text, level = f"{e.func}({_emit(e.arg, 0)})", _ATOM
    elif isinstance(e, Neg):
        text, level = f"-{_emit(e.operand, _UNARY)}", _UNARY
    elif isinstance(e, Pow):
        exp = _fmt_number(e.exponent)
        text, level = f"{_emit(e.base, _ATOM)}^{exp}", _POW
    elif isinstance(e, BinOp) and e.op in "+-":
        # right operand needs a bump so a - (b - c) keeps its grouping
        text = f"{_emit(e.left, _ADD)} {e.op} {_emit(e.right, _ADD + 1)}"
        level = _ADD
    elif isinstance(e, BinOp):
        text = f"{_emit(e.left, _MUL)} {e.op} {_emit(e.right, _MUL + 1)}"
        level = _MUL
    else:
        raise TypeError(f"not an expression node: {e!r}")
    return f"({text})" if level < ctx else text


def to_source(e):
    """Render an AST back to a string that reparses to an identical tree."""
    return _emit(e, 0)
