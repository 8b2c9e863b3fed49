"""Expression parsing, printing, and evaluation."""

import math

import pytest

from expsample import EvaluationError, ParseError, parse_function
from expsample.expr import parse_expression, to_source, evaluate


class TestParsing:
    def test_polynomial_times_cosine(self):
        f = parse_function("x^2 * cos(2*pi*x)")
        assert f(1.0) == pytest.approx(1.0, abs=1e-14)

    def test_negative_power_composition(self):
        f = parse_function("x^(-3) * exp(-sin(x^2))")
        assert f(1.0) == pytest.approx(math.exp(-math.sin(1.0)), rel=1e-14)

    def test_trailing_operator_offset(self):
        with pytest.raises(ParseError) as err:
            parse_function("2 +")
        assert err.value.offset == 3

    def test_unknown_identifier(self):
        with pytest.raises(ParseError, match="unknown identifier 'y'"):
            parse_function("y + 1")

    def test_unknown_function(self):
        with pytest.raises(ParseError, match="unknown identifier"):
            parse_function("sinh(x)")

    def test_arity(self):
        with pytest.raises(ParseError, match="exactly one argument"):
            parse_function("sin(x, 2)")

    def test_unbalanced_paren(self):
        with pytest.raises(ParseError):
            parse_function("(x + 1")

    def test_empty(self):
        with pytest.raises(ParseError):
            parse_function("   ")

    def test_scientific_notation(self):
        f = parse_function("1.5e-2 * x")
        assert f(2.0) == pytest.approx(0.03)

    def test_power_right_associative(self):
        f = parse_function("2^3^2")
        assert f(1.0) == 512.0

    def test_unary_minus_binds_looser_than_power(self):
        f = parse_function("-x^2")
        assert f(3.0) == -9.0

    def test_constants(self):
        f = parse_function("e^2 + pi")
        assert f(1.0) == pytest.approx(math.e ** 2 + math.pi)


class TestEvaluation:
    def test_negative_base_fractional_power(self):
        f = parse_function("(x - 2)^0.5")
        with pytest.raises(EvaluationError):
            f(1.0)

    def test_negative_base_integer_power_ok(self):
        f = parse_function("(x - 3)^3")
        assert f(1.0) == -8.0

    def test_log_domain(self):
        f = parse_function("log(x - 5)")
        with pytest.raises(EvaluationError):
            f(2.0)

    def test_division_by_zero(self):
        f = parse_function("1 / (x - 1)")
        with pytest.raises(EvaluationError):
            f(1.0)


ROUND_TRIP_SOURCES = [
    "x^2 * cos(2*pi*x)",
    "x^(-3) * exp(-sin(x^2))",
    "1 + 2*x - 3/x + x^0.5",
    "sqrt(abs(x - 2)) + tan(x/10)",
    "-x + (-(x^2)) * 1e-3",
    "log(x) * log(x) / (1 + x)",
    "2^-3 + x^2^2",
    "sin(cos(exp(1/x)))",
]


@pytest.mark.parametrize("src", ROUND_TRIP_SOURCES)
def test_print_parse_round_trip(src, rng):
    ast = parse_expression(src)
    reparsed = parse_expression(to_source(ast))
    for x in rng.uniform(0.5, 10.0, size=100):
        a = evaluate(ast, float(x))
        b = evaluate(reparsed, float(x))
        assert b == pytest.approx(a, rel=1e-12, abs=1e-12)
