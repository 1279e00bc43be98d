import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from berklocus.berkovich import (
    Type1,
    Type2,
    apply_flip,
    big_metric,
    canonical_chart,
    classify_direction,
    direction_toward,
    directional_multiplicity,
    image_of_point,
    is_fixed_point,
    join,
    multiplicity_at,
    point_in_direction,
    seminorm,
    tangent_map_at,
)
from berklocus.errors import InsufficientTower, NotFixed
from berklocus.finite_field import INFTY
from berklocus.padic import make_context
from berklocus.parse import parse_map
from berklocus.poly import Poly

import props

C3 = make_context(3)
G3 = Type2.gauss(C3)
INF = float("inf")


def m(expr, p, **kw):
    return parse_map(expr, p, **kw).to_map()


def z2(c, r, ctx=C3):
    return Type2(Fraction(c), Fraction(r), ctx)


def test_point_equality_and_containment():
    assert z2(0, 0) == z2(2, 0)
    assert z2(0, -1) != z2(1, -1)
    assert z2(0, -1) == z2(3, -1)
    assert z2(0, -1).contains(Fraction(9))
    assert not z2(0, -1).contains(INFTY)
    assert G3.is_gauss()


def test_seminorm_values():
    z = Poly([0, 1])
    assert seminorm(z, G3) == 0
    assert seminorm(z, z2(0, -2)) == -2
    assert seminorm(z, z2(1, -2)) == 0
    assert seminorm(Poly([-9, 0, 1]), z2(3, -1)) == -2


def test_join_and_metric():
    assert join(z2(0, -2), z2(1, -2)) == G3
    assert join(Type1(Fraction(0)), Type1(Fraction(9)), C3) == z2(0, -2)
    assert big_metric(z2(0, -2), z2(1, -2)) == 4
    assert big_metric(G3, z2(0, 1)) == 1
    assert big_metric(Type1(Fraction(0)), G3) == INF
    assert big_metric(Type1(Fraction(0)), Type1(Fraction(0))) == 0


def test_flip_action():
    assert apply_flip(z2(0, -1), C3) == z2(0, 1)
    assert apply_flip(z2(9, -3), C3) == z2(Fraction(1, 9), 1)
    assert apply_flip(Type1(INFTY), C3) == Type1(Fraction(0))


def test_directions():
    F = C3.residue_field
    assert direction_toward(G3, Type1(Fraction(4))) == F(1)
    assert direction_toward(G3, Type1(Fraction(1, 3))) is INFTY
    assert direction_toward(G3, z2(2, -5)) == F(2)
    assert direction_toward(G3, z2(0, 2)) is INFTY
    assert direction_toward(G3, G3) is None
    assert point_in_direction(G3, F(2), -3) == z2(2, -3)


def test_canonical_chart_needs_value_group():
    with pytest.raises(InsufficientTower):
        canonical_chart(z2(0, Fraction(1, 2)))
    c2 = make_context(3, ram_index=2)
    assert canonical_chart(Type2(Fraction(0), Fraction(1, 2), c2)).a.valuation() == Fraction(-1, 2)


def test_images_z_squared():
    phi = m("z^2", 3)
    assert image_of_point(phi, G3) == G3
    assert image_of_point(phi, z2(0, -1)) == z2(0, -2)
    assert image_of_point(phi, z2(1, -1)) == z2(1, -1)
    assert image_of_point(phi, z2(0, Fraction(-1, 2))) == z2(0, -1)
    assert image_of_point(phi, Type1(Fraction(2))) == Type1(Fraction(4))


def test_images_z_cubed_on_direction_one():
    # z^3 at p=3 pushes zeta_{1,p^-1} away from the Gauss point less than m=3 would
    phi = m("z^3", 3)
    assert image_of_point(phi, z2(1, -1)) == z2(1, -2)
    assert image_of_point(phi, z2(1, Fraction(-1, 2))) == z2(1, Fraction(-3, 2))


def test_half_radius_image_in_bad_position():
    phi = m("(z^2+p)/z", 3)
    img = image_of_point(phi, z2(0, Fraction(1, 2)))
    assert img == z2(0, Fraction(1, 2))


def test_multiplicities_and_tangent_maps():
    phi = m("z^2", 3)
    F = C3.residue_field
    assert multiplicity_at(phi, G3) == 2
    assert directional_multiplicity(phi, G3, F(1)) == 1
    assert directional_multiplicity(phi, G3, F(0)) == 2
    assert directional_multiplicity(phi, G3, INFTY) == 2
    assert tangent_map_at(phi, G3).degree == 2
    t = tangent_map_at(phi, z2(1, -1))
    assert t.degree == 1 and t(F(1)) == F(2)
    assert tangent_map_at(m("z^2", 5), Type2(Fraction(1), Fraction(-1), make_context(5))).degree == 1
    with pytest.raises(NotFixed):
        tangent_map_at(phi, z2(0, -1))
    assert is_fixed_point(phi, z2(1, -3))
    assert not is_fixed_point(phi, z2(2, -1))


def test_classify_directions():
    F = C3.residue_field
    bad = m("(z^2+p)/z", 3)
    assert classify_direction(bad, G3, F(0)) == "bad"
    assert classify_direction(bad, G3, F(1)) == "good"
    assert classify_direction(bad, G3, INFTY) == "good"
    good = m("(z^2+1)/(z+1)", 3)
    assert all(classify_direction(good, G3, a) == "good" for a in list(F.elements()) + [INFTY])


def test_ramified_tower_points():
    c2 = make_context(3, ram_index=2)
    phi = m("(z^2+p)/z", 3, ram=2)
    zeta = Type2(Fraction(0), Fraction(-1, 2), c2)
    assert is_fixed_point(phi, zeta)
    assert multiplicity_at(phi, zeta) == 2


seeds = st.integers(0, 10 ** 9)


@given(seed=seeds)
@settings(max_examples=60, deadline=None)
def test_seminorm_multiplicative(seed):
    props.check_seminorm_multiplicative(random.Random(seed))


@given(seed=seeds)
@settings(max_examples=60, deadline=None)
def test_rho_additive(seed):
    props.check_rho_additive(random.Random(seed))


@given(seed=seeds)
@settings(max_examples=30, deadline=None)
def test_direction_fiber_sums(seed):
    props.check_fiber_sum_directions(random.Random(seed))


@given(seed=seeds)
@settings(max_examples=20, deadline=None)
def test_point_fiber_sums(seed):
    props.check_fiber_sum_points(random.Random(seed))


@given(seed=seeds)
@settings(max_examples=20, deadline=None)
def test_local_scaling(seed):
    props.check_scaling(random.Random(seed))


@given(seed=seeds)
@settings(max_examples=20, deadline=None)
def test_monotone_multiplicity(seed):
    props.check_monotone(random.Random(seed))


@given(p=st.sampled_from([2, 3, 5]), c=st.integers(-50, 50), r=st.integers(-5, 5))
@settings(max_examples=60, deadline=None)
def test_flip_is_an_involution(p, c, r):
    ctx = make_context(p)
    z = Type2(Fraction(c), Fraction(r), ctx)
    assert apply_flip(apply_flip(z, ctx), ctx) == z
    assert big_metric(apply_flip(z, ctx), Type2.gauss(ctx)) == big_metric(z, Type2.gauss(ctx))
