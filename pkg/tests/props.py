"""Seeded property checks shared by the hypothesis suites and the acceptance run.

Each check draws its own instance from ``rng`` and raises AssertionError on a
violation.
"""

from __future__ import annotations

import random
from fractions import Fraction

from berklocus.berkovich import (
    Type1,
    Type2,
    big_metric,
    canonical_chart,
    conjugate_to_gauss,
    directional_multiplicity,
    image_of_point,
    join,
    mobius_point,
    multiplicity_at,
    seminorm,
)
from berklocus.finite_field import INFTY
from berklocus.oracle import _first_breakpoint
from berklocus.padic import make_context
from berklocus.poly import Poly, embed_poly, ff_roots_in_closure, qq_factor
from berklocus.rational_map import MobiusMap, conjugate, reduce

from helpers import random_good_map, random_map, random_mobius


def rand_rational(rng, lo=-20, hi=20):
    return Fraction(rng.randint(lo, hi), rng.choice([1, 1, 2, 3, 5, 7]))


def rand_poly(rng, max_degree=4):
    d = rng.randint(0, max_degree)
    cs = [rand_rational(rng) for _ in range(d)] + [rand_rational(rng, 1, 20)]
    return Poly(cs)


def rand_type2(rng, ctx):
    return Type2(rand_rational(rng), Fraction(rng.randint(-4, 4)), ctx)


def check_seminorm_multiplicative(rng: random.Random):
    ctx = make_context(rng.choice([2, 3, 5]))
    f, g, z = rand_poly(rng), rand_poly(rng), rand_type2(rng, ctx)
    assert seminorm(f * g, z) == seminorm(f, z) + seminorm(g, z)


def check_rho_additive(rng: random.Random):
    ctx = make_context(rng.choice([2, 3, 5]))
    x, y = rand_type2(rng, ctx), rand_type2(rng, ctx)
    j = join(x, y)
    total = big_metric(x, y)
    assert total == big_metric(x, j) + big_metric(j, y)
    # any point between x and the join splits the distance
    if j.rlog > x.rlog:
        mid = Type2(x.center, rng.randint(int(x.rlog), int(j.rlog)), ctx)
        assert total == big_metric(x, mid) + big_metric(mid, y)
    assert big_metric(x, y) == big_metric(y, x)


def _fiber(r, w):
    """Distinct preimage labels of w under the residual map r."""
    K = r.field if w is INFTY else w.field
    n, d = embed_poly(r.num, K), embed_poly(r.den, K)
    g = d if w is INFTY else n - d * w
    out = []
    if g.degree > 0:
        _, roots = ff_roots_in_closure(g)
        out = [a for a, _ in roots]
    if g.degree < r.degree:
        out.append(INFTY)
    return out


def check_fiber_sum_directions(rng: random.Random):
    """Directional multiplicities over a fiber of the tangent map add up to the multiplicity."""
    ctx = make_context(rng.choice([2, 3, 5]))
    phi = random_map(rng, ctx.prime)
    zeta = rand_type2(rng, ctx)
    psi, _ = conjugate_to_gauss(phi, zeta)
    r = reduce(psi)
    F = ctx.residue_field
    w = rng.choice(list(F.elements()) + [INFTY])
    total = sum(r.local_multiplicity(a) for a in _fiber(r, w))
    assert total == multiplicity_at(phi, zeta) == r.degree


def check_fiber_sum_points(rng: random.Random):
    """Preimages of a rational target, and of a conjugated Gauss point, weigh up to the degree."""
    p = rng.choice([2, 3, 5])
    phi = random_map(rng, p)
    n, d = phi.exact
    t = rand_rational(rng)
    g = n - d * t
    total = phi.degree - g.degree
    if total:
        assert image_of_point(phi, Type1(INFTY)) == Type1(t)
    for f, e in qq_factor(g):
        total += e * f.degree
        if f.degree == 1:
            a = -f[0] / f[1]
            assert image_of_point(phi, Type1(a)) == Type1(t)
    assert total == phi.degree
    good = random_good_map(rng, 3, primes=(p,))
    sigma = random_mobius(rng, p)
    psi = conjugate(good, sigma)
    eta = mobius_point(sigma, Type2.gauss(psi.ctx), psi.ctx)
    assert image_of_point(psi, eta) == eta
    assert multiplicity_at(psi, eta) == psi.degree


def check_scaling(rng: random.Random):
    """rho(phi x, phi y) = m(zeta, v) rho(x, y) before the first breakpoint, at a fixed zeta."""
    good = random_good_map(rng, 4)
    ctx = good.ctx
    sigma = random_mobius(rng, ctx.prime)
    phi = conjugate(good, sigma)
    zeta = mobius_point(sigma, Type2.gauss(ctx), ctx)
    if zeta.contains(Fraction(0)) and rng.random() < 0.25:
        # reach the infinity direction by flipping the source
        phi = conjugate(phi, MobiusMap.flip())
        zeta = mobius_point(MobiusMap.flip(), zeta, ctx)
    psi, xi = conjugate_to_gauss(phi, zeta)
    assert xi == zeta
    a = rng.choice(list(ctx.residue_field.elements()))
    m = directional_multiplicity(phi, zeta, a)
    c = Fraction(int(a.coeffs[0]) if a.coeffs else 0)
    r_star = max(_first_breakpoint(psi, c, m), Fraction(-6))
    tau = canonical_chart(zeta)
    r1 = r_star * Fraction(rng.randint(0, 8), 8)
    r2 = r1 + (r_star - r1) * Fraction(rng.randint(0, 8), 8)
    x = mobius_point(tau, Type2(c, r1, ctx), ctx)
    y = mobius_point(tau, Type2(c, r2, ctx), ctx)
    fx, fy = image_of_point(phi, x), image_of_point(phi, y)
    assert big_metric(fx, fy) == m * big_metric(x, y)


def check_monotone(rng: random.Random, maps=None):
    """Along an arc leaving the Gauss point, multiplicity never increases (good reduction)."""
    phi = rng.choice(maps) if maps else random_good_map(rng, 4)
    ctx = phi.ctx
    a = rng.choice(list(ctx.residue_field.elements()))
    c = Fraction(int(a.coeffs[0]) if a.coeffs else 0) + ctx.prime * rand_rational(rng, -5, 5).numerator
    depths = sorted(rng.sample(range(0, 7), 3))
    mults = [multiplicity_at(phi, Type2(c, -k, ctx)) for k in depths]
    assert mults[0] >= mults[1] >= mults[2]
    assert mults[0] <= phi.degree


PROPERTIES = {
    "seminorm multiplicativity": check_seminorm_multiplicative,
    "rho arc additivity": check_rho_additive,
    "directional fiber sums": check_fiber_sum_directions,
    "point fiber sums": check_fiber_sum_points,
    "local scaling": check_scaling,
    "multiplicity monotonicity": check_monotone,
}
