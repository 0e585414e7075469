import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ppsym.expr import (
    ArityError,
    DomainError,
    Environment,
    FunctionSymbol,
    NonZero,
    NumericZero,
    ParseContext,
    ParseError,
    RewriteRule,
    SymbolicZero,
    UnknownIdentifier,
    apply_rewrites,
    differentiate,
    evaluate,
    expand,
    instantiate,
    is_zero,
    parse,
    simplify_basic,
    substitute,
    to_string,
)
from ppsym.verify import Sampler

from .conftest import central_diff, num

BOX = Sampler.box({"u": (0.5, 2.0), "v": (-1.0, 1.0), "y": (0.5, 2.0), "z": (0.5, 2.0)}, count=16)


# parsing ----------------------------------------------------------------------

@pytest.mark.parametrize("text, value", [
    ("1 + 2*3", 7.0),
    ("2^3^2", 512.0),       # right associative
    ("-2^2", -4.0),
    ("(1/2)*4", 2.0),
    ("10/4/5", 0.5),
    ("1.5e1 - .5", 14.5),
])
def test_parse_arithmetic(text, value):
    assert num(text) == pytest.approx(value)


def test_chart_abbreviations():
    assert num("r", y=3, z=4) == pytest.approx(5.0)
    assert num("theta", y=0, z=2) == pytest.approx(math.pi / 2)


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse("u + * v")
    assert info.value.position == 5


def test_strict_context_rejects_unknown():
    with pytest.raises(UnknownIdentifier):
        parse("u + q", ParseContext(symbols={"u"}, strict=True))


def test_function_arity_is_fixed_on_first_use():
    ctx = ParseContext()
    parse("F(u, y)", ctx)
    with pytest.raises((ArityError, ParseError)):
        parse("F(u)", ctx)


def test_print_parse_round_trip_on_derivatives():
    e = differentiate(parse("F(u, y)*sin(y)"), "y")
    again = parse(to_string(e))
    assert to_string(simplify_basic(again)) == to_string(simplify_basic(e))


# evaluation ----------------------------------------------------------------------

def test_log_of_negative_is_domain_error():
    with pytest.raises(DomainError):
        evaluate(parse("ln(u)"), Environment(coordinates={"u": np.array([-1.0])}))


# calculus ------------------------------------------------------------------------

EXPRS = [
    "sin(u)*y^2 + exp(z/3)",
    "ln(u)*r",
    "arctan(y/z) + u^(3/2)*cos(y*z)",
    "theta*u^-2 + sqrt(1 + y^2)",
    "(y^2 - z^2)/(u + 1)^3",
]


@pytest.mark.parametrize("text", EXPRS)
@pytest.mark.parametrize("var", ["u", "y", "z"])
def test_derivative_matches_finite_difference(text, var):
    e = parse(text)
    de = differentiate(e, var)
    point = {"u": 1.3, "v": 0.2, "y": 0.7, "z": 1.1}
    fd = central_diff(lambda **p: num(e, **p), point, var)
    assert num(de, **point) == pytest.approx(fd, rel=1e-7, abs=1e-9)


@given(st.floats(0.5, 2.0), st.floats(0.5, 2.0), st.floats(0.5, 2.0))
@settings(max_examples=40, deadline=None)
def test_mixed_partials_commute(u, y, z):
    e = parse("exp(u*y)*sin(z) + ln(u)*y^3*z + r*theta")
    a = differentiate(differentiate(e, "y"), "z")
    b = differentiate(differentiate(e, "z"), "y")
    assert num(a, u=u, y=y, z=z) == pytest.approx(num(b, u=u, y=y, z=z), rel=1e-10, abs=1e-12)


def test_instantiate_chain_rule():
    # d/du F(u^2) with F = sin  -> 2u cos(u^2)
    e = differentiate(parse("F(u^2)"), "u")
    got = instantiate(e, {"F": parse("sin(x1)")})
    assert num(got, u=0.8) == pytest.approx(2 * 0.8 * math.cos(0.64))


def test_substitute_symbol():
    e = substitute(parse("u*y + y"), {"y": parse("z^2")})
    assert num(e, u=2, z=3) == pytest.approx(27.0)


# simplification and zero tests ----------------------------------------------------

def test_expand_square():
    assert is_zero(expand(parse("(y+1)^2 - y^2 - 2*y - 1")), BOX) == SymbolicZero()


@given(st.integers(-5, 5), st.integers(-5, 5))
def test_simplify_cancels_like_terms(a, b):
    e = parse(f"({a})*u*y + ({b})*u*y - ({a + b})*y*u")
    assert to_string(simplify_basic(e)) == "0"


def test_numeric_zero_for_trig_identity():
    verdict = is_zero(parse("sin(u)^2 + cos(u)^2 - 1"), BOX)
    assert isinstance(verdict, (SymbolicZero, NumericZero))


def test_nonzero_carries_witness():
    verdict = is_zero(parse("u - u + 1e-3*y"), BOX)
    assert isinstance(verdict, NonZero)
    assert not verdict
    assert verdict.value == pytest.approx(1e-3 * verdict.witness["point"]["y"])


# rewriting ------------------------------------------------------------------------

def test_rewrite_reduces_second_derivative():
    d = FunctionSymbol("d", 1)
    rule = RewriteRule(d, (2,), parse("-4*d(x1)"))
    e = differentiate(differentiate(differentiate(parse("d(u)"), "u"), "u"), "u")
    lowered = apply_rewrites(e, [rule])
    # d''' = -4 d'
    assert to_string(simplify_basic(lowered)) == to_string(simplify_basic(parse("-4*d'[1](u)")))


def test_rewrite_agrees_with_closed_form():
    d = FunctionSymbol("d", 1)
    rule = RewriteRule(d, (2,), parse("-4*d(x1)"))
    e = differentiate(differentiate(parse("u*d(u)"), "u"), "u")
    lowered = apply_rewrites(e, [rule])
    closed = instantiate(lowered, {"d": parse("cos(2*x1)")})
    direct = differentiate(differentiate(parse("u*cos(2*u)"), "u"), "u")
    assert num(closed, u=0.9) == pytest.approx(num(direct, u=0.9))
