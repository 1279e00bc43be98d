"""Rational maps over a p-adic tower: normalization, reduction, conjugation,
residual fixed/critical analysis and type-1 fixed point classification."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import FactorizationUnsupported, InsufficientTower, PrecisionExhausted, PreconditionError
from .finite_field import FFElem, INFTY
from .newton import newton_polygon
from .padic import INF, FieldContext, PadicElem, make_context, vp_rational
from .poly import (
    QQ,
    Poly,
    embed_poly,
    ff_roots_in_closure,
    interpolate,
    poly_gcd,
    qq_factor,
    resultant,
    squarefree_part,
    sylvester_resultant,
    taylor_shift,
)


class _AllPoints:
    def __repr__(self):
        return "ALL"


ALL_POINTS = _AllPoints()


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def val(x, ctx: FieldContext):
    """Valuation of a rational or tower element (rationals are exact)."""
    if isinstance(x, PadicElem):
        return x.valuation()
    return vp_rational(x, ctx.prime)


def min_valuation(coeffs, ctx: FieldContext):
    """Least valuation among coefficients, certified against inexact zeros."""
    known, bound = INF, INF
    for c in coeffs:
        if isinstance(c, PadicElem) and c.is_inexact_zero():
            bound = min(bound, c.valuation_lower_bound())
        else:
            known = min(known, val(c, ctx))
    if bound < known or (known == INF and bound != INF):
        raise PrecisionExhausted("minimal coefficient valuation cannot be certified")
    return known


def scale_by_valuation(ctx: FieldContext, e) -> PadicElem | Fraction:
    """An element of valuation exactly -e (a rational power of p when possible)."""
    m = e * ctx.ram_index
    if m.denominator != 1:
        raise ValueError(f"valuation {e} outside the value group")
    m = int(m)
    if m % ctx.ram_index == 0:
        return Fraction(ctx.prime) ** (-(m // ctx.ram_index))
    return ctx.pi_power(-m)


def normalize_poly(f: Poly, ctx: FieldContext) -> Poly:
    """Scale f so that its coefficients are integral with one unit coefficient."""
    e = min_valuation(f.coeffs, ctx)
    s = scale_by_valuation(ctx, e)
    return f * s


def reduce_poly(f: Poly, ctx: FieldContext) -> Poly:
    F = ctx.residue_field
    return Poly([ctx.coerce(c).residue() for c in f.coeffs], F)


def to_tower(f: Poly, ctx: FieldContext) -> Poly:
    if f.ring == ctx:
        return f
    return Poly([ctx.coerce(c) for c in f.coeffs], ctx)


# --- Mobius maps ---

@dataclass(frozen=True)
class MobiusMap:
    """z -> (a z + b) / (c z + d)."""

    a: object
    b: object
    c: object
    d: object

    @classmethod
    def identity(cls):
        return cls(Fraction(1), Fraction(0), Fraction(0), Fraction(1))

    @classmethod
    def affine(cls, scale, shift=Fraction(0)):
        return cls(scale, shift, Fraction(0), Fraction(1))

    @classmethod
    def flip(cls):
        return cls(Fraction(0), Fraction(1), Fraction(1), Fraction(0))

    @property
    def is_exact(self) -> bool:
        return all(_is_exact(x) for x in (self.a, self.b, self.c, self.d))

    def det(self):
        return self.a * self.d - self.b * self.c

    def inverse(self) -> MobiusMap:
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def compose(self, other: MobiusMap) -> MobiusMap:
        """self o other."""
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return MobiusMap(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def is_affine(self) -> bool:
        return _zero(self.c)

    def __call__(self, z):
        if z is INFTY:
            if _zero(self.c):
                return INFTY
            return self.a / self.c
        den = self.c * z + self.d
        if _zero(den):
            return INFTY
        return (self.a * z + self.b) / den

    def __repr__(self):
        return f"({self.a}*z + {self.b})/({self.c}*z + {self.d})"


def _zero(x) -> bool:
    if isinstance(x, PadicElem):
        return x.is_exact_zero()
    return x == 0


# --- rational maps ---

class RationalMap:
    """phi = num/den over a tower, optionally carrying exact rational coefficients.

    When ``exact`` is present it is authoritative for factorization-type
    work (gcds, square-free parts, factoring over Q); the tower coefficients
    ``num``/``den`` are its embeddings and carry the context's precision.
    """

    def __init__(self, ctx: FieldContext, num: Poly, den: Poly, exact=None, normalized=False, chart=None):
        self.ctx = ctx
        self.chart = chart
        self.num = to_tower(num, ctx)
        self.den = to_tower(den, ctx)
        self.exact = exact
        self.normalized = normalized
        if self.den.is_zero():
            raise ValueError("denominator is zero")
        for f in (self.num, self.den):
            if f.coeffs and f.coeffs[-1].is_inexact_zero() and exact is None:
                raise PrecisionExhausted("leading coefficient indistinguishable from zero")

    @classmethod
    def from_rational(cls, ctx: FieldContext, num, den=(1,)) -> RationalMap:
        n = num if isinstance(num, Poly) else Poly(num, QQ)
        d = den if isinstance(den, Poly) else Poly(den, QQ)
        if d.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not n.is_zero():
            g = poly_gcd(n, d)
            if g.degree > 0:
                n, d = n // g, d // g
        return _normalize_exact(ctx, n, d)

    @property
    def degree(self) -> int:
        if self.exact is not None:
            n, d = self.exact
            return max(n.degree, d.degree, 0)
        return max(self.num.degree, self.den.degree, 0)

    @property
    def num_degree(self) -> int:
        return self.exact[0].degree if self.exact is not None else self.num.degree

    @property
    def den_degree(self) -> int:
        return self.exact[1].degree if self.exact is not None else self.den.degree

    def polys(self):
        """(num, den) in the best available ring: exact Q if known, else the tower."""
        if self.exact is not None:
            return self.exact
        return self.num, self.den

    def __call__(self, z):
        if z is INFTY:
            n, d = self.polys()
            if n.degree > d.degree:
                return INFTY
            if n.degree < d.degree:
                return Fraction(0) if self.exact is not None else self.ctx.zero
            return n.lc() / d.lc()
        n, d = self.polys() if _is_exact(z) else (self.num, self.den)
        dv = d(z)
        if _zero(dv):
            return INFTY
        return n(z) / dv

    def __repr__(self):
        n, d = self.polys()
        return f"({n})/({d})"


def _normalize_exact(ctx, n: Poly, d: Poly) -> RationalMap:
    p = ctx.prime
    e = min(vp_rational(c, p) for c in n.coeffs + d.coeffs)
    s = Fraction(p) ** (-e)
    n, d = n * s, d * s
    return RationalMap(ctx, to_tower(n, ctx), to_tower(d, ctx), exact=(n, d), normalized=True)


def normalize(phi: RationalMap) -> RationalMap:
    if phi.exact is not None:
        return _normalize_exact(phi.ctx, *phi.exact)
    ctx = phi.ctx
    e = min_valuation(phi.num.coeffs + phi.den.coeffs, ctx)
    s = scale_by_valuation(ctx, e)
    return RationalMap(ctx, phi.num * s, phi.den * s, normalized=True)


def transform(phi: RationalMap, left: MobiusMap | None = None, right: MobiusMap | None = None) -> RationalMap:
    """The normalized map left o phi o right."""
    ctx = phi.ctx
    exact = phi.exact is not None and (left is None or left.is_exact) and (right is None or right.is_exact)
    if exact:
        ring, (n, d) = QQ, phi.exact
        conv = Fraction
    else:
        ring, n, d = ctx, phi.num, phi.den
        conv = ctx.coerce
    D = phi.degree
    if right is not None:
        X = Poly([conv(right.b), conv(right.a)], ring)
        Y = Poly([conv(right.d), conv(right.c)], ring)
        Ypow = [Poly([1], ring)]
        Xpow = [Poly([1], ring)]
        for _ in range(D):
            Ypow.append(Ypow[-1] * Y)
            Xpow.append(Xpow[-1] * X)

        def homog(f):
            acc = Poly([], ring)
            for i, c in enumerate(f.coeffs):
                acc = acc + Xpow[i] * Ypow[D - i] * c
            return acc

        n, d = homog(n), homog(d)
    if left is not None:
        a, b, c, e = (conv(x) for x in (left.a, left.b, left.c, left.d))
        n, d = n * a + d * b, n * c + d * e
    if exact:
        return _normalize_exact(ctx, n, d)
    return normalize(RationalMap(ctx, n, d))


def conjugate(phi: RationalMap, sigma: MobiusMap) -> RationalMap:
    """The normalized map sigma o phi o sigma^-1."""
    return transform(phi, left=sigma, right=sigma.inverse())


# --- reduction ---

class ResidualMap:
    """A rational map over a finite field with coprime numerator and denominator."""

    def __init__(self, num: Poly, den: Poly):
        F = num.ring
        if num.is_zero() and den.is_zero():
            raise ValueError("0/0 is not a residual map")
        if num.is_zero():
            num, den = Poly([], F), Poly([1], F)
        elif den.is_zero():
            num, den = Poly([1], F), Poly([], F)
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
            lc = den.lc()
            num, den = num * lc.inverse(), den * lc.inverse()
        self.field = F
        self.num, self.den = num, den

    @property
    def degree(self) -> int:
        if self.den.is_zero() or self.num.is_zero():
            return 0
        return max(self.num.degree, self.den.degree)

    @property
    def constant(self) -> bool:
        return self.degree == 0

    def is_identity(self) -> bool:
        return self.num == Poly.x(self.field) and self.den == Poly([1], self.field)

    def __call__(self, a):
        K = a.field if isinstance(a, FFElem) else self.field
        n, d = embed_poly(self.num, K), embed_poly(self.den, K)
        if a is INFTY:
            if n.degree > d.degree:
                return INFTY
            if n.degree < d.degree:
                return K.zero
            return n.lc() / d.lc()
        dv = d(a)
        if dv.is_zero():
            return INFTY
        return n(a) / dv

    def source_flip(self) -> ResidualMap:
        D = self.degree
        return ResidualMap(self.num.reverse(D), self.den.reverse(D))

    def local_multiplicity(self, a) -> int:
        if self.constant:
            raise PreconditionError("local multiplicity of a constant map")
        if a is INFTY:
            return self.source_flip().local_multiplicity(self.field.zero)
        K = a.field
        n, d = embed_poly(self.num, K), embed_poly(self.den, K)
        dv = d(a)
        if dv.is_zero():
            return taylor_shift(d, a).order_at_zero()
        b = n(a) / dv
        return taylor_shift(n - d * b, a).order_at_zero()

    def fixed_point_polynomial(self) -> Poly:
        return self.num - Poly.x(self.field) * self.den

    def fixed_points(self):
        """(field, [(point, multiplicity)]) or ALL_POINTS for the identity."""
        if self.constant:
            c = self(self.field.zero)
            return self.field, [(c, 1)]
        fp = self.fixed_point_polynomial()
        if fp.is_zero():
            return ALL_POINTS
        K, roots = ff_roots_in_closure(fp) if fp.degree > 0 else (self.field, [])
        m_inf = self.degree + 1 - fp.degree
        if m_inf > 0:
            roots = roots + [(INFTY, m_inf)]
        return K, roots

    def critical_points(self):
        """(field, [(point, local multiplicity >= 2)]) or ALL_POINTS when inseparable."""
        if self.constant:
            raise PreconditionError("critical points of a constant map")
        wr = self.num.derivative() * self.den - self.num * self.den.derivative()
        if wr.is_zero():
            return ALL_POINTS
        K, roots = ff_roots_in_closure(wr) if wr.degree > 0 else (self.field, [])
        out = []
        for r, _ in roots:
            m = self.local_multiplicity(r)
            if m >= 2:
                out.append((r, m))
        m_inf = ResidualMap(embed_poly(self.num, K), embed_poly(self.den, K)).local_multiplicity(INFTY)
        if m_inf >= 2:
            out.append((INFTY, m_inf))
        return K, out

    def __repr__(self):
        return f"({self.num})/({self.den}) over {self.field}"


def reduce(phi: RationalMap) -> ResidualMap:
    if not phi.normalized:
        phi = normalize(phi)
    ctx = phi.ctx
    return ResidualMap(reduce_poly(phi.num, ctx), reduce_poly(phi.den, ctx))


def is_good_reduction(phi: RationalMap) -> bool:
    return reduce(normalize(phi) if not phi.normalized else phi).degree == phi.degree


def fixed_point_polynomial(phi: RationalMap):
    """(P, infinity_fixed) with P = num - z*den, in the exact ring when available."""
    inf_fixed = phi.num_degree > phi.den_degree
    if phi.chart is not None:
        P0, _ = fixed_point_polynomial(phi.chart.source)
        return phi.chart.pullback(P0, shift=-1) * phi.chart.lam, inf_fixed
    n, d = phi.polys()
    P = n - Poly.x(n.ring) * d
    return P, inf_fixed


@dataclass(frozen=True)
class Chart:
    """Records psi = A^-1 o source o A for A(z) = center + pi^k z, with psi scaled by lam.

    Polynomials attached to the exact source map are transported to psi's
    coordinate coefficient by coefficient, so exact zeros stay exact.
    """

    source: RationalMap
    center: Fraction
    k: int
    lam: object = Fraction(1)

    def pullback(self, f0: Poly, shift: int = 0) -> Poly:
        """sum_j c_j pi^(k(j+shift)) z^j where f0(center + t) = sum_j c_j t^j."""
        ctx = self.source.ctx
        g = taylor_shift(f0, Fraction(self.center))
        return Poly([ctx.coerce(q) * ctx.pi_power(self.k * (j + shift)) if q != 0 else ctx.zero
                     for j, q in enumerate(g.coeffs)], ctx)

    def to_chart(self, a):
        """A^-1(a) for an exact source point."""
        if a is INFTY:
            return INFTY
        ctx = self.source.ctx
        return ctx.coerce(Fraction(a) - self.center) * ctx.pi_power(-self.k)


def pull_back_map(phi: RationalMap, A: MobiusMap) -> RationalMap:
    """The normalized map A^-1 o phi o A.

    For an affine A whose scale is a power of pi outside Q, the result keeps
    a :class:`Chart` back to the exact map so that fixed point data stays exact.
    """
    ctx = phi.ctx
    if A.is_exact or phi.exact is None or not A.is_affine() or not _is_exact(A.b) or not _is_exact(A.d):
        return transform(phi, left=A.inverse(), right=A)
    scale = A.a / A.d
    if not isinstance(scale, PadicElem) or scale.val is None or scale.unit != ctx.pi_power(scale.val).unit:
        return transform(phi, left=A.inverse(), right=A)
    k, c = scale.val, Fraction(A.b) / Fraction(A.d)
    n, d = phi.exact
    chart = Chart(phi, c, k)
    num = chart.pullback(n - d * c, shift=-1)
    den = chart.pullback(d)
    e = min_valuation(num.coeffs + den.coeffs, ctx)
    lam = scale_by_valuation(ctx, e)
    chart = Chart(phi, c, k, lam)
    return RationalMap(ctx, num * lam, den * lam, normalized=True, chart=chart)


def residual_fixed_points(rmap: ResidualMap):
    return rmap.fixed_points()


def residual_critical_points(rmap: ResidualMap):
    return rmap.critical_points()


def residual_fixed_data(rmap: ResidualMap):
    """Residual fixed points with their fixed-point and local multiplicities.

    Returns ``(field, [(point, fixed_mult, local_mult)])``; the identity map
    yields ALL_POINTS.
    """
    fx = rmap.fixed_points()
    if fx is ALL_POINTS:
        return ALL_POINTS
    K, pts = fx
    lifted = ResidualMap(embed_poly(rmap.num, K), embed_poly(rmap.den, K))
    return K, [(a, m, lifted.local_multiplicity(a)) for a, m in pts]


# --- type-1 fixed points ---

CLASSES = ("superattracting", "attracting", "indifferent", "repelling")


def classify_multiplier(v) -> str:
    """Class of a fixed point from the valuation of its multiplier."""
    if v == INF:
        return "superattracting"
    if v > 0:
        return "attracting"
    if v == 0:
        return "indifferent"
    return "repelling"


@dataclass
class Type1FixedPoint:
    """A classical fixed point, exact when ``value`` is set, otherwise symbolic.

    ``factor`` is the irreducible factor (over Q when available) whose root it
    is, ``valuation`` the root's valuation and ``direction`` the residue point
    of P^1 it reduces to. ``multiplier_valuation`` is v(lambda): |lambda| =
    p^-v; ``None`` when unknown.
    """

    value: object
    factor: Poly | None
    valuation: object
    direction: object
    multiplier_valuation: object = None
    cls: str | None = None
    index: int = 0
    source_factor: Poly | None = None
    source_value: object = None

    @property
    def is_infinity(self) -> bool:
        return self.value is INFTY


def direction_counts(f: Poly, ctx: FieldContext):
    """Root counts of f per residue direction at the Gauss point.

    Returns ``(K, [(label, count)])``: finite labels are roots of the
    reduction of normalized f in a splitting field K, and INFTY collects the
    roots of absolute value > 1.
    """
    ft = normalize_poly(to_tower(f, ctx), ctx)
    red = reduce_poly(ft, ctx)
    if red.degree > 0:
        K, out = ff_roots_in_closure(red)
    else:
        K, out = ctx.residue_field, []
    out = list(out)
    if f.degree - red.degree > 0:
        out.append((INFTY, f.degree - red.degree))
    return K, out


def ord_at(f: Poly, a) -> int:
    """Order of vanishing of a residue-field polynomial at a point of P^1 (INFTY uses the degree deficit)."""
    if a is INFTY:
        raise ValueError("use the degree deficit for INFTY")
    return taylor_shift(embed_poly(f, a.field), a).order_at_zero()


def _wronskian(n: Poly, d: Poly) -> Poly:
    return n.derivative() * d - n * d.derivative()


def _multiplier_polynomial(f: Poly, n: Poly, d: Poly):
    """Lambda(y) = Res_z(f, y*d^2 - W): its roots are the multipliers at the roots of f."""
    ring = f.ring
    A, B = d * d, _wronskian(n, d)
    m = max(A.degree, B.degree)
    ys = list(range(f.degree + 1))
    vals = []
    for y in ys:
        g = A * y - B
        vals.append(sylvester_resultant(list(f.coeffs), f.degree, list(g.coeffs), m, ring))
    return interpolate(ys, vals, ring)


def multiplier_valuations(f: Poly, phi: RationalMap) -> list:
    """Valuations of phi'(a) over the roots a of f (``inf`` for superattracting)."""
    n, d = phi.polys()
    if f.ring != n.ring:
        f = to_tower(f, phi.ctx)
    lam = _multiplier_polynomial(f, n, d)
    if not lam.coeffs:
        raise PrecisionExhausted("multiplier polynomial vanished")
    vals = [INF if _zero(c) else val(c, phi.ctx) for c in lam.coeffs]
    return newton_polygon(vals).root_valuations()


def _exact_multiplier(phi: RationalMap, a):
    n, d = phi.exact
    dv = d(a)
    return _wronskian(n, d)(a) / (dv * dv)


def _hensel_multiplier_valuation(phi: RationalMap, f: Poly, label):
    """Multiplier valuation at the unique root of f in a finite direction, by Newton iteration.

    Returns None when the direction holds more than one root or its residue
    is not in the tower.
    """
    ctx = phi.ctx
    if label is INFTY:
        return None
    if label.field != ctx.residue_field and f.ring == QQ and phi.exact is not None:
        # exact data can be read in the unramified extension holding the residue
        ext = make_context(ctx.prime, label.field.degree, ctx.ram_index, ctx.precision)
        if ext.residue_field == label.field:
            ctx = ext
    ft = normalize_poly(to_tower(f, ctx), ctx)
    red = reduce_poly(ft, ctx)
    try:
        a = ctx.lift(label)
    except InsufficientTower:
        return None
    if red.degree < 1 or ord_at(red, label) != 1:
        return None
    df = ft.derivative()
    for _ in range(ctx.precision.bit_length() + 2):
        step = ft(a)
        if step.is_zero():
            break
        a = a - step * df(a).inverse()
    n, d = (to_tower(g, ctx) for g in phi.polys())
    w, dv = _wronskian(n, d)(a), d(a)
    if w.is_inexact_zero():
        raise PrecisionExhausted("multiplier vanishes to working precision")
    if w.is_zero():
        return INF
    return w.valuation() - 2 * dv.valuation()


def infinity_multiplier_valuation(phi: RationalMap):
    flipped = conjugate(phi, MobiusMap.flip())
    n, d = flipped.polys()
    d0 = d(0) if flipped.exact is not None else d[0]
    w0 = _wronskian(n, d)
    w0 = w0[0] if not w0.is_zero() else (Fraction(0) if flipped.exact is not None else phi.ctx.zero)
    if _zero(w0):
        return INF
    return val(w0, phi.ctx) - 2 * val(d0, phi.ctx)


def squarefree_fixed_polynomial(phi: RationalMap) -> Poly:
    P, _ = fixed_point_polynomial(phi)
    if P.is_zero():
        raise PreconditionError("the identity map has no isolated fixed points")
    if phi.exact is not None:
        return squarefree_part(P)
    if phi.chart is not None:
        return phi.chart.pullback(squarefree_fixed_polynomial(phi.chart.source))
    if P.degree >= 1:
        disc = resultant(P, P.derivative())
        if disc.is_zero():
            raise FactorizationUnsupported("fixed point polynomial cannot be certified square-free over the tower")
    return P


def fixed_point_factors(phi: RationalMap) -> list:
    """Factors of the square-free fixed point polynomial: over Q if exact, else one tower factor."""
    return [f for f, _ in _factor_pairs(phi)]


def _factor_pairs(phi: RationalMap) -> list:
    """(factor in phi's coordinate, exact factor of the chart source or None)."""
    if phi.chart is not None:
        src = phi.chart.source
        return [(phi.chart.pullback(g), g) for g in fixed_point_factors(src)]
    Psf = squarefree_fixed_polynomial(phi)
    if Psf.degree < 1:
        return []
    if phi.exact is not None:
        return [(g, None) for g, _ in qq_factor(Psf)]
    return [(Psf, None)]


def locate_type1_fixed_points(phi: RationalMap) -> list:
    """One record per distinct type-1 fixed point, with valuation and residue direction.

    Multipliers are not filled in; see :func:`classify_type1_fixed_points`.
    """
    ctx = phi.ctx
    records = []
    for f, f0 in _factor_pairs(phi):
        ft = to_tower(f, ctx)
        npv = newton_polygon([c.valuation() for c in ft.coeffs]).root_valuations()
        pos = sorted(v for v in npv if v > 0)
        neg = sorted(v for v in npv if v < 0)
        K, counts = direction_counts(f, ctx)
        exact_root = -f[0] / f[1] if f.degree == 1 and f.ring == QQ else None
        src_root = -f0[0] / f0[1] if f0 is not None and f0.degree == 1 else None
        if src_root is not None:
            exact_root = phi.chart.to_chart(src_root)
        for label, count in counts:
            for i in range(count):
                if label is INFTY:
                    v = neg.pop(0)
                elif label.is_zero():
                    v = pos.pop(0)
                else:
                    v = Fraction(0)
                records.append(Type1FixedPoint(exact_root, f, v, label, index=i,
                                               source_factor=f0, source_value=src_root))
    _, inf_fixed = fixed_point_polynomial(phi)
    if inf_fixed:
        records.append(Type1FixedPoint(INFTY, None, -INF, INFTY))
    return records


def classify_type1_fixed_points(phi: RationalMap) -> list:
    if phi.degree < 2:
        raise PreconditionError("classification needs degree >= 2")
    phi = phi if phi.normalized else normalize(phi)
    records = locate_type1_fixed_points(phi)
    good = is_good_reduction(phi)
    rmap = reduce(phi) if good else None
    # multipliers are conjugation invariant, so a chart defers to its exact source
    src = phi.chart.source if phi.chart is not None else phi
    by_factor = {}
    for r in records:
        value = r.source_value if phi.chart is not None else r.value
        if r.is_infinity:
            r.multiplier_valuation = infinity_multiplier_valuation(src)
        elif value is not None and src.exact is not None:
            lam = _exact_multiplier(src, value)
            r.multiplier_valuation = INF if lam == 0 else vp_rational(lam, phi.ctx.prime)
        else:
            by_factor.setdefault(id(r.factor), []).append(r)
    for group in by_factor.values():
        f = group[0].source_factor if phi.chart is not None else group[0].factor
        vs = multiplier_valuations(f, src)
        if len(set(vs)) == 1:
            for r in group:
                r.multiplier_valuation = vs[0]
            continue
        if not good:
            raise FactorizationUnsupported("multipliers differ across roots of an unsplit factor")
        vs_rest = list(vs)
        pending = []
        for r in group:
            v = _hensel_multiplier_valuation(phi, r.factor, r.direction)
            if v is None:
                pending.append(r)
                continue
            if v not in vs_rest:
                raise FactorizationUnsupported("lifted multiplier not among the resultant roots")
            vs_rest.remove(v)
            r.multiplier_valuation = v
        unit = [r for r in pending if rmap.local_multiplicity(r.direction) == 1]
        rest = [r for r in pending if r not in unit]
        for r in unit:
            if 0 not in vs_rest:
                raise FactorizationUnsupported("multiplier pairing inconsistent with residual data")
            vs_rest.remove(0)
            r.multiplier_valuation = Fraction(0)
        if len(set(vs_rest)) > 1:
            raise FactorizationUnsupported("multipliers differ across roots in critical directions")
        for r in rest:
            r.multiplier_valuation = vs_rest[0]
        if not rest and vs_rest:
            raise FactorizationUnsupported("multiplier count mismatch")
    for r in records:
        r.cls = classify_multiplier(r.multiplier_valuation)
    return records
