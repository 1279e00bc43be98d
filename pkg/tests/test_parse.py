from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from berklocus.errors import ParseError, ZeroDenominator
from berklocus.parse import format_rational_function, parse_map, parse_mobius, parse_rational_function
from berklocus.poly import Poly

from helpers import qq_polys


def test_textbook_style_inputs():
    n, d = parse_rational_function("(z^2+z+p^2)/(z^2+1)", 3)
    assert n == Poly([9, 1, 1]) and d == Poly([1, 0, 1])
    n, d = parse_rational_function("z^3", 3)
    assert n == Poly([0, 0, 0, 1]) and d == Poly([1])
    n, d = parse_rational_function("(z^2+1)/(z+1)", 5)
    assert n == Poly([1, 0, 1]) and d == Poly([1, 1])


def test_lowest_terms_and_monic_denominator():
    n, d = parse_rational_function("(2*z^2-2)/(4*z-4)", 3)
    assert n == Poly([Fraction(1, 2), Fraction(1, 2)]) and d == Poly([1])
    n, d = parse_rational_function("1/(3z)", 5)
    assert n == Poly([Fraction(1, 3)]) and d == Poly([0, 1])


def test_grammar_features():
    same = [
        "2z^2 - z/3 + 1/2",
        "2*z**2 - (1/3)*z + 1/2",
        "-(-2)z z - z/3 + 3/6",
        "(z+0)^2 * 2 - z/(1+2) + 1/2",
    ]
    specs = [parse_map(s, 7) for s in same]
    assert all(s.same_map(specs[0]) for s in specs)
    assert parse_map("p^2 z", 5).num == Poly([0, 25])
    assert parse_map("z^0", 5).num == Poly([1])


@pytest.mark.parametrize(
    "text,offset",
    [("z +* 2", 3), ("(z+1", 4), ("z $ 1", 2), ("zé+1", 1), ("z^-1", 2), ("", 0), ("z^z", 2)],
)
def test_syntax_errors_carry_byte_offsets(text, offset):
    with pytest.raises(ParseError) as info:
        parse_map(text, 3)
    assert info.value.offset == offset


def test_byte_offsets_count_utf8():
    with pytest.raises(ParseError) as info:
        parse_map("\u00a0z $", 3)
    assert info.value.offset == 4


def test_zero_denominator():
    with pytest.raises(ZeroDenominator):
        parse_map("z/(p-p)", 3)
    with pytest.raises(ZeroDenominator):
        parse_map("1/0", 3)


def test_mobius():
    m = parse_mobius("(3z+1)/(z-2)", 5)
    assert (m.a, m.b, m.c, m.d) == (3, 1, 1, -2)
    with pytest.raises(ParseError):
        parse_mobius("z^2", 5)
    with pytest.raises(ParseError):
        parse_mobius("(2z+2)/(z+1)", 5)


@given(num=qq_polys(0, 4), den=qq_polys(0, 3), p=st.sampled_from([2, 3, 5, 7]))
@settings(max_examples=150, deadline=None)
def test_print_reparse_round_trip(num, den, p):
    text = format_rational_function(num, den)
    spec = parse_map(text, p)
    again = parse_map(spec.canonical_text(), p)
    assert again.same_map(spec)
    assert spec.num * den == num * spec.den


exprs = st.recursive(
    st.one_of(st.just("z"), st.just("p"), st.integers(0, 9).map(str)),
    lambda inner: st.one_of(
        st.tuples(inner, st.sampled_from(["+", "-", "*"]), inner).map(lambda t: f"({t[0]}{t[1]}{t[2]})"),
        st.tuples(inner, st.integers(0, 3)).map(lambda t: f"({t[0]})^{t[1]}"),
        st.tuples(inner, inner).map(lambda t: f"({t[0]})/({t[1]}+z^2+1)"),
    ),
    max_leaves=8,
)


@given(text=exprs, p=st.sampled_from([2, 3, 5]))
@settings(max_examples=150, deadline=None)
def test_random_expressions_round_trip(text, p):
    try:
        spec = parse_map(text, p)
    except ZeroDenominator:
        return
    assert parse_map(spec.canonical_text(), p).same_map(spec)
