from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from berklocus.errors import ConfigError, InsufficientTower, NegativeValuation, PrecisionExhausted
from berklocus.padic import embed, make_context, vp_rational

from helpers import nonzero_rationals, primes, rationals


def test_valuations_and_residues():
    c3 = make_context(3)
    assert c3.from_rational(9).valuation() == 2
    assert c3.from_rational(Fraction(1, 3)).valuation() == -1
    assert c3.from_rational(Fraction(1, 4)).residue() == c3.residue_field(1)
    with pytest.raises(NegativeValuation):
        c3.from_rational(Fraction(1, 3)).residue()


def test_ramified_uniformizer():
    c = make_context(3, ram_index=2)
    assert c.pi.valuation() == Fraction(1, 2)
    assert (c.pi * c.pi - 3).is_zero()


def test_unramified_generator():
    c = make_context(3, unram_degree=2)
    theta = c.lift(c.residue_field.gen)
    assert (theta * theta + 1).residue().is_zero()


def test_precision_cap():
    c = make_context(3, precision=2)
    x = c.from_rational(9)
    assert x.is_inexact_zero()
    with pytest.raises(PrecisionExhausted):
        x.valuation()


def test_bad_configuration():
    with pytest.raises(ConfigError):
        make_context(4)
    with pytest.raises(ConfigError):
        make_context(3, precision=0)


def test_lift_outside_residue_field():
    c9 = make_context(3, unram_degree=2)
    c3 = make_context(3)
    with pytest.raises(InsufficientTower):
        c3.lift(c9.residue_field.gen)


def test_embed_into_ramified_tower():
    c1, c2 = make_context(5), make_context(5, ram_index=2)
    x = embed(c1.from_rational(Fraction(10, 3)), c2)
    assert x.valuation() == 1
    with pytest.raises(InsufficientTower):
        embed(c2.pi, c1)


@given(p=primes, a=nonzero_rationals, b=nonzero_rationals)
@settings(max_examples=150)
def test_valuation_is_additive(p, a, b):
    c = make_context(p)
    assert (c.coerce(a) * c.coerce(b)).valuation() == vp_rational(a, p) + vp_rational(b, p)


@given(p=primes, a=rationals, b=rationals)
@settings(max_examples=150)
def test_ring_homomorphism(p, a, b):
    c = make_context(p, precision=30)
    s = c.coerce(a) + c.coerce(b) - c.coerce(a + b)
    m = c.coerce(a) * c.coerce(b) - c.coerce(a * b)
    assert s.is_zero() and m.is_zero()


@given(p=primes, a=nonzero_rationals, w=st.integers(1, 3))
@settings(max_examples=100)
def test_inverse(p, a, w):
    c = make_context(p, ram_index=w, precision=24)
    x = c.coerce(a) * c.pi_power(1)
    assert (x * x.inverse() - 1).is_zero()


@given(p=primes, a=nonzero_rationals, b=nonzero_rationals)
@settings(max_examples=100)
def test_ultrametric(p, a, b):
    c = make_context(p)
    if a + b != 0:
        assert (c.coerce(a) + c.coerce(b)).valuation() >= min(vp_rational(a, p), vp_rational(b, p))
