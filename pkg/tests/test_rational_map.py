import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from berklocus.padic import make_context
from berklocus.parse import parse_map
from berklocus.rational_map import (
    ALL_POINTS,
    MobiusMap,
    RationalMap,
    classify_multiplier,
    classify_type1_fixed_points,
    conjugate,
    fixed_point_polynomial,
    is_good_reduction,
    pull_back_map,
    reduce,
    residual_fixed_data,
    squarefree_fixed_polynomial,
)

from helpers import random_good_map, random_map, random_mobius

INF = float("inf")


def m(expr, p, **kw):
    return parse_map(expr, p, **kw).to_map()


def _labels(pairs):
    return {str(a): k for a, k in pairs}


def test_reduce_example_33():
    r = reduce(m("(z^2+1)/(z+1)", 3))
    assert r.degree == 2
    _, fixed = r.fixed_points()
    assert _labels(fixed) == {"1": 1, "inf": 2}
    K, crit = r.critical_points()
    assert K.order == 9 and len(crit) == 2
    for c, _ in crit:
        assert (c * c + 2 * c - 1).is_zero()


def test_reduce_example_37_conjugate_is_identity():
    r = reduce(m("(p*z^2+z+p)/(p^2*z^2+1)", 3))
    assert r.is_identity and r.degree == 1
    assert not is_good_reduction(m("(p*z^2+z+p)/(p^2*z^2+1)", 3))
    assert r.fixed_points() is ALL_POINTS or r.fixed_points()[1] is ALL_POINTS


def test_conjugation_formula():
    phi = m("z^2", 3)
    psi = conjugate(phi, MobiusMap.affine(Fraction(3), Fraction(1)))
    n, d = psi.polys()
    # (z^2 - 2z + 4)/3 up to a common scalar
    assert [c / n.coeffs[2] for c in n.coeffs] == [4, -2, 1] and d.degree == 0


def test_degree_drop_is_bad_reduction():
    phi = m("(z^2+p)/z", 3)
    r = reduce(phi)
    assert phi.degree == 2 and r.degree == 1
    assert not is_good_reduction(phi)


def test_inseparable_reduction_every_point_critical():
    assert reduce(m("z^3", 3)).critical_points() is ALL_POINTS


def test_fixed_point_polynomial_quadratic():
    P, inf_fixed = fixed_point_polynomial(m("(z^2+1)/(z+1)", 3))
    assert inf_fixed and P.degree == 1


def test_multiplier_classes():
    assert classify_multiplier(INF) == "superattracting"
    assert classify_multiplier(Fraction(1)) == "attracting"
    assert classify_multiplier(0) == "indifferent"
    assert classify_multiplier(-1) == "repelling"


@pytest.mark.parametrize("p", [2, 3, 5])
def test_z_squared_fixed_points(p):
    got = {str(t.value): t.cls for t in classify_type1_fixed_points(m("z^2", p))}
    assert got["0"] == got["inf"] == "superattracting"
    assert got["1"] == ("attracting" if p == 2 else "indifferent")


def test_multipliers_off_the_gauss_point():
    # z^2/p fixes 3 (multiplier 2) and 0 (multiplier 0)
    got = {str(t.value): t.cls for t in classify_type1_fixed_points(m("z^2/p", 3))}
    assert got["3"] == "indifferent" and got["0"] == "superattracting"
    # 3z^2 - z: multiplier -1 at 0, 3 at 2/3
    got = {str(t.value): t.cls for t in classify_type1_fixed_points(m("3*z^2-z", 3))}
    assert got["0"] == "indifferent" and got["2/3"] == "attracting"
    # (z^2 - z)/p: multiplier -1/3 at 0
    got = {str(t.value): t.cls for t in classify_type1_fixed_points(m("(z^2-z)/p", 3))}
    assert got["0"] == "repelling"


def test_ramified_pull_back_keeps_exact_zeros():
    ctx = make_context(3, ram_index=2)
    phi = RationalMap.from_rational(ctx, [3, 0, 1], [0, 1])
    A = MobiusMap.affine(ctx.pi_power(1), Fraction(0))
    psi = pull_back_map(phi, A)
    assert is_good_reduction(psi)
    assert reduce(psi).degree == 2


@given(seed=st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_reduction_scaling_invariant(seed):
    rng = random.Random(seed)
    p = rng.choice([2, 3, 5])
    phi = random_map(rng, p)
    n, d = phi.polys()
    k = Fraction(p) ** rng.randint(-3, 3) * rng.choice([1, -1, 7])
    psi = RationalMap.from_rational(phi.ctx, [c * k for c in n.coeffs], [c * k for c in d.coeffs])
    a, b = reduce(phi), reduce(psi)
    assert a.degree == b.degree and str(a) == str(b)


@given(seed=st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_reduction_degree_bound_and_fixed_count(seed):
    rng = random.Random(seed)
    phi = random_map(rng, rng.choice([2, 3, 5]))
    r = reduce(phi)
    assert r.degree <= phi.degree
    if not r.is_identity and r.degree >= 1:
        _, fixed = r.fixed_points()
        assert sum(k for _, k in fixed) <= r.degree + 1


@given(seed=st.integers(0, 10 ** 6))
@settings(max_examples=30, deadline=None)
def test_conjugate_round_trip(seed):
    rng = random.Random(seed)
    p = rng.choice([2, 3, 5])
    phi = random_map(rng, p)
    sigma = random_mobius(rng, p)
    back = conjugate(conjugate(phi, sigma), sigma.inverse())
    n1, d1 = phi.polys()
    n2, d2 = back.polys()
    assert n1 * d2 == n2 * d1


@given(seed=st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_good_reduction_has_no_repelling_points(seed):
    phi = random_good_map(random.Random(seed), max_degree=3)
    for t in classify_type1_fixed_points(phi):
        assert t.cls != "repelling"


@given(seed=st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_squarefree_fixed_polynomial_matches_residual_count(seed):
    phi = random_good_map(random.Random(seed), max_degree=3)
    P = squarefree_fixed_polynomial(phi)
    _, inf_fixed = fixed_point_polynomial(phi)
    assert P.degree + (1 if inf_fixed else 0) <= phi.degree + 1
    _, data = residual_fixed_data(reduce(phi))
    assert len(data) <= phi.degree + 1
