"""Shared generators for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from berklocus.padic import make_context
from berklocus.rational_map import MobiusMap, RationalMap, is_good_reduction

PRIMES = (2, 3, 5)

small_ints = st.integers(min_value=-12, max_value=12)
rationals = st.builds(Fraction, st.integers(-30, 30), st.integers(1, 12))
nonzero_rationals = rationals.filter(lambda q: q != 0)
primes = st.sampled_from(PRIMES)


@st.composite
def qq_polys(draw, min_degree=0, max_degree=4):
    from berklocus.poly import Poly

    d = draw(st.integers(min_degree, max_degree))
    coeffs = draw(st.lists(rationals, min_size=d + 1, max_size=d + 1))
    lead = draw(nonzero_rationals)
    return Poly(coeffs[:d] + [lead])


def random_mobius(rng: random.Random, p: int) -> MobiusMap:
    """A random invertible Mobius map with rational entries."""
    k = rng.randint(-2, 2)
    u = rng.choice([1, -1, 2, Fraction(1, 2), 4])
    beta = Fraction(rng.randint(-9, 9), rng.choice([1, 2, 7]))
    aff = MobiusMap(Fraction(p) ** k * u, beta, Fraction(0), Fraction(1))
    while True:
        a, b, c, d = (rng.randint(-4, 4) for _ in range(4))
        if (a * d - b * c) % p:
            break
    uni = MobiusMap(Fraction(a), Fraction(b), Fraction(c), Fraction(d))
    return aff.compose(uni) if rng.random() < 0.5 else uni.compose(aff)


def random_good_map(rng: random.Random, max_degree: int = 4, primes=PRIMES):
    """Random small-integer map of degree >= 2 with good reduction."""
    while True:
        p = rng.choice(primes)
        d = rng.randint(2, max_degree)
        num = [rng.randint(-6, 6) for _ in range(d + 1)]
        den = [rng.randint(-6, 6) for _ in range(rng.randint(1, d + 1))]
        if all(c == 0 for c in den) or all(c == 0 for c in num):
            continue
        phi = RationalMap.from_rational(make_context(p), num, den)
        if phi.degree >= 2 and is_good_reduction(phi):
            return phi


def random_map(rng: random.Random, p: int, max_degree: int = 3):
    """Random small-integer map of degree >= 1 (any reduction type)."""
    while True:
        d = rng.randint(1, max_degree)
        num = [rng.randint(-9, 9) for _ in range(d + 1)]
        den = [rng.randint(-9, 9) for _ in range(rng.randint(1, d + 1))]
        if all(c == 0 for c in den) or all(c == 0 for c in num):
            continue
        phi = RationalMap.from_rational(make_context(p), num, den)
        if phi.degree >= 1:
            return phi
