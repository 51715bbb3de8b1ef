import math

import pytest

from galbern import ExprEvalError, ExprSyntaxError, PointState, evaluate, free_vars, parse, to_source
from galbern.expr import BinOp, Call, Neg, Num, Pow, Var


def ev(source, **state):
    return evaluate(parse(source), PointState(**state))


class TestParse:
    def test_quintic_forcing(self):
        assert ev("x^5 - x^3 - 18*x^2 + 12*x - 18", x=1.0) == pytest.approx(-24.0)

    def test_nonlinear_product(self):
        e = parse("(1/6) * d2p * d2q")
        assert free_vars(e) == {"d2p", "d2q"}

    def test_exponential_square(self):
        e = parse("exp(-x) * p^2")
        assert isinstance(e, BinOp) and e.op == "*"
        assert isinstance(e.left, Call) and e.left.func == "exp"
        assert e.right == Pow(Var("p"), 2.0)

    def test_whitespace_insignificant(self):
        assert parse(" 1+2 * x ") == parse("1 + 2*x")

    def test_number_forms(self):
        assert parse("2.5e-3") == Num(0.0025)
        assert parse(".5") == Num(0.5)
        assert parse("3.") == Num(3.0)


class TestEvaluate:
    def test_constant(self):
        assert ev("2") == 2.0

    def test_second_derivative_product(self):
        assert ev("d2p * dq", d2p=2.0, dq=3.0) == 6.0

    def test_scaled_exponential(self):
        assert ev("-6*exp(x)", x=0.0) == pytest.approx(-6.0)

    def test_functions(self):
        assert ev("sin(x)", x=math.pi / 2) == pytest.approx(1.0)
        assert ev("cos(x)", x=0.0) == 1.0
        assert ev("ln(x)", x=math.e) == pytest.approx(1.0)
        assert ev("sqrt(x)", x=9.0) == 3.0

    def test_precedence(self):
        assert ev("2+3*4^2") == 50.0

    def test_unary_minus_vs_power(self):
        assert ev("-x^2", x=3.0) == -9.0
        assert ev("(-x)^2", x=3.0) == 9.0

    def test_negative_exponent(self):
        assert ev("x^-2", x=2.0) == 0.25

    def test_integer_power_is_repeated_multiplication(self):
        x = 1.1
        expected = 1.0
        for _ in range(16):
            expected *= x
        assert ev("x^16", x=x) == expected  # bitwise equal

    def test_division_by_zero(self):
        with pytest.raises(ExprEvalError) as info:
            ev("1 / x", x=0.0)
        assert info.value.x == 0.0

    def test_log_of_negative(self):
        with pytest.raises(ExprEvalError):
            ev("ln(x)", x=-1.0)
        with pytest.raises(ExprEvalError):
            ev("ln(x)", x=0.0)

    def test_sqrt_of_negative(self):
        with pytest.raises(ExprEvalError):
            ev("sqrt(x - 4)", x=0.0)

    def test_error_carries_abscissa(self):
        with pytest.raises(ExprEvalError) as info:
            ev("p / (x - 1)", x=1.0, p=2.0)
        assert info.value.x == 1.0


class TestFreeVars:
    def test_single(self):
        assert free_vars(parse("x^2")) == {"x"}

    def test_pair(self):
        assert free_vars(parse("(1/6)*d2p*d2q")) == {"d2p", "d2q"}

    def test_polynomial_forcing(self):
        assert free_vars(parse("24*x^4 + 6")) == {"x"}

    def test_constant_has_none(self):
        assert free_vars(parse("3 * 7")) == frozenset()

    def test_all_seven(self):
        e = parse("x + p + dp + d2p + q + dq + d2q")
        assert free_vars(e) == {"x", "p", "dp", "d2p", "q", "dq", "d2q"}


class TestErrors:
    def test_truncated_input(self):
        with pytest.raises(ExprSyntaxError):
            parse("x +")

    def test_unknown_character_offset(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse("2 @ 3")
        assert info.value.offset == 2

    def test_unknown_identifier(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse("d3p * x")
        assert "d3p" in str(info.value)
        assert info.value.offset == 0

    def test_unknown_function(self):
        with pytest.raises(ExprSyntaxError):
            parse("tan(x)")

    def test_non_literal_exponent(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse("x^q")
        assert "literal" in str(info.value)
        with pytest.raises(ExprSyntaxError):
            parse("x^(2)")

    def test_chained_exponent_rejected(self):
        with pytest.raises(ExprSyntaxError):
            parse("x^2^3")

    def test_unbalanced_parens(self):
        with pytest.raises(ExprSyntaxError):
            parse("(x + 1")
        with pytest.raises(ExprSyntaxError):
            parse("x + 1)")

    def test_empty_source(self):
        with pytest.raises(ExprSyntaxError):
            parse("")


ROUND_TRIP_SOURCES = [
    "x^5 - x^3 - 18*x^2 + 12*x - 18",
    "(1/6) * d2p * d2q",
    "exp(-x) * p^2",
    "-(2 + x) * exp(x)",
    "-x^2",
    "2 + 3 * 4^2",
    "x - (p - q)",
    "x / (dp / dq)",
    "1 - -x",
    "sqrt(x) * ln(x + 1) / cos(x)",
    "x^-3 + 2.5e-3",
    "-(-x)",
    "((x))",
]


class TestRoundTrip:
    @pytest.mark.parametrize("source", ROUND_TRIP_SOURCES)
    def test_reparse_is_structurally_identical(self, source):
        ast = parse(source)
        assert parse(to_source(ast)) == ast

    def test_printer_respects_grouping(self):
        assert to_source(parse("x - (p - q)")) == "x - (p - q)"
        assert to_source(parse("(x + p) * q")) == "(x + p) * q"
        assert to_source(parse("(-x)^2")) == "(-x)^2"


class TestPointState:
    def test_defaults_are_zero(self):
        s = PointState()
        assert (s.x, s.p, s.dp, s.d2p, s.q, s.dq, s.d2q) == (0.0,) * 7

    def test_immutable(self):
        with pytest.raises(AttributeError):
            PointState().x = 1.0


class TestNodeEquality:
    def test_structural(self):
        assert parse("1 + x") == BinOp("+", Num(1.0), Var("x"))
        assert parse("-6*exp(x)") == BinOp("*", Neg(Num(6.0)), Call("exp", Var("x")))
