"""Type-1 and type-2 points of the Berkovich line, joins, the big metric,
seminorms, images of points, multiplicities and tangent directions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    InsufficientTower,
    NotFixed,
    PrecisionExhausted,
    PreconditionError,
)
from .finite_field import FFElem, INFTY
from .padic import INF, FieldContext, PadicElem, vp_rational
from .poly import QQ, Poly, taylor_shift
from .rational_map import (
    MobiusMap,
    RationalMap,
    ResidualMap,
    _is_exact,
    _zero,
    normalize_poly,
    reduce,
    reduce_poly,
    scale_by_valuation,
    to_tower,
    transform,
)


# --- points ---

@dataclass(frozen=True, eq=False)
class Type1:
    """A classical point: a rational, a tower element, INFTY, or a symbolic fixed point record."""

    value: object

    @property
    def rlog(self):
        return -INF

    def __eq__(self, other):
        if not isinstance(other, Type1):
            return False
        a, b = self.value, other.value
        if a is INFTY or b is INFTY:
            return a is b
        if _is_exact(a) and _is_exact(b):
            return a == b
        d = _sub(a, b)
        return isinstance(d, PadicElem) and d.is_zero()

    def __hash__(self):
        return hash("type1")

    def __repr__(self):
        return f"Type1({self.value})"


@dataclass(frozen=True, eq=False)
class Type2:
    """The point zeta_{center, p^rlog}: the closed disk |z - center| <= p^rlog."""

    center: object
    rlog: Fraction
    ctx: FieldContext = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "rlog", Fraction(self.rlog))

    @classmethod
    def gauss(cls, ctx: FieldContext) -> Type2:
        return cls(Fraction(0), Fraction(0), ctx)

    @property
    def diameter_log(self):
        return self.rlog

    def contains(self, a) -> bool:
        """Whether the classical point a lies in the closed disk."""
        if a is INFTY:
            return False
        return _val_at_least(_sub(a, self.center), -self.rlog, self.ctx)

    def __eq__(self, other):
        if not isinstance(other, Type2):
            return False
        return self.rlog == other.rlog and self.contains(other.center)

    def __hash__(self):
        return hash(self.rlog)

    def is_gauss(self) -> bool:
        return self == Type2.gauss(self.ctx)

    def __repr__(self):
        return f"zeta({self.center}, p^{self.rlog})"


BerkPoint = Type1 | Type2


@dataclass(frozen=True)
class Direction:
    """A tangent direction at a type-2 point, labelled by a point of the residue line."""

    base: Type2
    label: object

    def __repr__(self):
        return f"Direction({self.base}, {self.label})"


# --- low level helpers ---

def _sub(a, b):
    if _is_exact(a) and _is_exact(b):
        return Fraction(a) - Fraction(b)
    if isinstance(a, PadicElem):
        return a - b
    return b.ctx.coerce(a) - b


def _val_at_least(x, bound, ctx: FieldContext) -> bool:
    """Certified test v(x) >= bound."""
    if _is_exact(x):
        return x == 0 or vp_rational(x, ctx.prime) >= bound
    if x.is_exact_zero():
        return True
    if x.is_inexact_zero():
        if x.valuation_lower_bound() >= bound:
            return True
        raise PrecisionExhausted("cannot decide disk membership at this precision")
    return x.valuation() >= bound


def _logabs(x, ctx: FieldContext):
    """log_p |x|, with -inf for an exact zero."""
    if _is_exact(x):
        return -INF if x == 0 else -vp_rational(x, ctx.prime)
    if x.is_exact_zero():
        return -INF
    return -x.valuation()


def _ring_of(f: Poly, c, ctx: FieldContext):
    """f and c over a common ring, preferring exact rationals."""
    if f.ring == QQ and _is_exact(c):
        return f, Fraction(c)
    return to_tower(f, ctx), ctx.coerce(c)


def expansion(f: Poly, center, ctx: FieldContext) -> Poly:
    """f(center + t)."""
    g, c = _ring_of(f, center, ctx)
    return taylor_shift(g, c)


def _log_terms(coeffs, rlog, ctx: FieldContext, start: int = 0):
    """Max of log|c_j| + j*rlog, certified against inexact zeros."""
    best, bound = -INF, -INF
    for j, cj in enumerate(coeffs):
        if j < start:
            continue
        if isinstance(cj, PadicElem) and cj.is_inexact_zero():
            bound = max(bound, -cj.valuation_lower_bound() + j * rlog)
        elif not _zero(cj):
            best = max(best, _logabs(cj, ctx) + j * rlog)
    if bound >= best and bound != -INF:
        raise PrecisionExhausted("seminorm cannot be certified at this precision")
    return best


def seminorm(f, zeta: Type2):
    """log_p |f|_zeta for a polynomial or rational map."""
    ctx = zeta.ctx
    if isinstance(f, RationalMap):
        n, d = f.polys()
        return seminorm(n, zeta) - seminorm(d, zeta)
    if f.is_zero():
        return -INF
    return _log_terms(expansion(f, zeta.center, ctx).coeffs, zeta.rlog, ctx)


def join(x, y, ctx: FieldContext | None = None):
    """The join x v y toward infinity (ctx is needed only for two rational classical points)."""
    for pt in (x, y):
        if isinstance(pt, Type1) and (pt.value is INFTY or not _is_numeric(pt.value)):
            raise PreconditionError("join needs finite classical points or type-2 points")
    if isinstance(x, Type1) and isinstance(y, Type1):
        if x == y:
            return x
        for v in (x.value, y.value):
            if isinstance(v, PadicElem):
                ctx = v.ctx
        if ctx is None:
            raise PreconditionError("join of two rational classical points needs a field context")
        return Type2(x.value, _logabs(_sub(x.value, y.value), ctx), ctx)
    if isinstance(x, Type1):
        x, y = y, x
    ctx = x.ctx
    d = _sub(x.center, y.center if isinstance(y, Type2) else y.value)
    r = max(x.rlog, y.rlog)
    if isinstance(d, PadicElem) and d.is_inexact_zero():
        if -d.valuation_lower_bound() <= r:
            return Type2(x.center, r, ctx)
        raise PrecisionExhausted("join cannot be certified at this precision")
    return Type2(x.center, max(r, _logabs(d, ctx)), ctx)


def _is_numeric(v) -> bool:
    return _is_exact(v) or isinstance(v, PadicElem)


def big_metric(x, y):
    """rho(x, y) in log_p units; infinite when either point is classical."""
    if isinstance(x, Type1) or isinstance(y, Type1):
        if x == y:
            return Fraction(0)
        return INF
    j = join(x, y)
    return 2 * j.rlog - x.rlog - y.rlog


# --- Mobius action on points ---

def apply_affine(pt, scale, shift, ctx: FieldContext):
    """Image of pt under z -> scale*z + shift."""
    if isinstance(pt, Type1):
        if pt.value is INFTY:
            return pt
        return Type1(_add(_mul(scale, pt.value), shift))
    return Type2(_add(_mul(scale, pt.center), shift), pt.rlog + _logabs(scale, ctx), ctx)


def apply_flip(pt, ctx: FieldContext):
    """Image of pt under z -> 1/z."""
    if isinstance(pt, Type1):
        v = pt.value
        if v is INFTY:
            return Type1(Fraction(0))
        if _zero(v):
            return Type1(INFTY)
        return Type1(1 / v)
    if pt.contains(Fraction(0)):
        return Type2(Fraction(0), -pt.rlog, ctx)
    lc = _logabs(pt.center, ctx)
    return Type2(1 / pt.center, pt.rlog - 2 * lc, ctx)


def _mul(a, b):
    if _is_exact(a) and _is_exact(b):
        return Fraction(a) * Fraction(b)
    return a * b if isinstance(a, PadicElem) else b * a


def _add(a, b):
    if _is_exact(a) and _is_exact(b):
        return Fraction(a) + Fraction(b)
    return a + b if isinstance(a, PadicElem) else b + a


def mobius_point(M: MobiusMap, pt, ctx: FieldContext):
    """Image of a point under a Mobius map."""
    if _zero(M.c):
        return apply_affine(pt, _div(M.a, M.d), _div(M.b, M.d), ctx)
    # M(z) = a/c - det/c^2 * 1/(z + d/c)
    pt = apply_affine(pt, Fraction(1), _div(M.d, M.c), ctx)
    pt = apply_flip(pt, ctx)
    det = M.det()
    return apply_affine(pt, _div(-det, _mul(M.c, M.c)), _div(M.a, M.c), ctx)


def _div(a, b):
    if _is_exact(a) and _is_exact(b):
        return Fraction(a) / Fraction(b)
    return a / b


# --- canonical coordinates ---

def _exact_lift(ctx: FieldContext, b: FFElem):
    if b.in_prime_field():
        return Fraction(int(b.coeffs[0]) if b.coeffs else 0)
    return ctx.lift(b)


def canonical_chart(zeta: Type2) -> MobiusMap:
    """tau(z) = center + pi^m z, taking the Gauss point to zeta."""
    try:
        s = scale_by_valuation(zeta.ctx, zeta.rlog)
    except ValueError:
        raise InsufficientTower(f"radius p^{zeta.rlog} is outside the value group of {zeta.ctx}") from None
    return MobiusMap.affine(s, zeta.center)


def direction_toward(zeta: Type2, y):
    """Label of the direction at zeta containing y; None when y == zeta."""
    ctx = zeta.ctx
    if isinstance(y, Type1):
        if y.value is INFTY:
            return INFTY
        a = y.value
    else:
        if y == zeta:
            return None
        if y.rlog > zeta.rlog and y.contains(zeta.center):
            return INFTY
        a = y.center
    if not zeta.contains(a):
        return INFTY
    tau = canonical_chart(zeta)
    u = _div(_sub(a, zeta.center), tau.a)
    return _residue(u, ctx)


def _residue(u, ctx):
    if _is_exact(u):
        return ctx.coerce(u).residue() if u != 0 else ctx.residue_field.zero
    return u.residue()


def point_in_direction(zeta: Type2, label, rlog) -> Type2:
    """The type-2 point of radius p^rlog on the arc from zeta into the given direction."""
    ctx = zeta.ctx
    rlog = Fraction(rlog)
    if label is INFTY:
        if rlog <= zeta.rlog:
            raise PreconditionError("points toward infinity have larger radius")
        return Type2(zeta.center, rlog, ctx)
    if rlog >= zeta.rlog:
        raise PreconditionError("points in a finite direction have smaller radius")
    tau = canonical_chart(zeta)
    c = _add(zeta.center, _mul(tau.a, _exact_lift(ctx, label)))
    return Type2(c, rlog, ctx)


# --- images ---

def _pole_free(coeffs, rlog, ctx) -> bool:
    """Whether the constant term strictly dominates on the disk (certified)."""
    if not coeffs or _zero(coeffs[0]):
        return False
    c0 = coeffs[0]
    if isinstance(c0, PadicElem) and c0.is_inexact_zero():
        return False
    lead = _logabs(c0, ctx)
    for j in range(1, len(coeffs)):
        cj = coeffs[j]
        if isinstance(cj, PadicElem) and cj.is_inexact_zero():
            if -cj.valuation_lower_bound() + j * rlog >= lead:
                return False
        elif not _zero(cj) and _logabs(cj, ctx) + j * rlog >= lead:
            return False
    return True


def _image_pole_free(phi: RationalMap, zeta: Type2):
    """Image when the denominator has no zero on the disk, else None."""
    ctx = zeta.ctx
    n, d = phi.polys()
    de = expansion(d, zeta.center, ctx)
    if not _pole_free(de.coeffs, zeta.rlog, ctx):
        return None
    ne = expansion(n, zeta.center, ctx)
    b = _div(ne[0], de[0])
    diff = ne - de * b
    s = _log_terms(diff.coeffs, zeta.rlog, ctx, start=1)
    if s == -INF:
        raise PreconditionError("constant map")
    return Type2(b, s - _logabs(de[0], ctx), ctx)


def _gauss_log(phi: RationalMap, ctx):
    n, d = phi.polys()
    g = Type2.gauss(ctx)
    return seminorm(n, g) - seminorm(d, g)


def _image_by_descent(phi: RationalMap, zeta: Type2):
    """Image via successive residual reductions (radius must lie in the value group)."""
    ctx = zeta.ctx
    tau = canonical_chart(zeta)
    cur = transform(phi, right=tau)
    undo = []
    for _ in range(4 * ctx.precision + 8):
        r = reduce(cur)
        if not r.constant:
            pt = Type2.gauss(ctx)
            for step in reversed(undo):
                pt = step(pt)
            return pt
        if r.den.is_zero():
            cur = transform(cur, left=MobiusMap.flip())
            undo.append(lambda pt: apply_flip(pt, ctx))
            continue
        b = _exact_lift(ctx, r.num[0] / r.den[0])
        shifted = transform(cur, left=MobiusMap.affine(Fraction(1), -b))
        v = -_gauss_log(shifted, ctx)
        s = scale_by_valuation(ctx, v)
        cur = transform(shifted, left=MobiusMap.affine(s))
        inv = _div(Fraction(1), s)
        undo.append(lambda pt, inv=inv, b=b: apply_affine(pt, inv, b, ctx))
    raise PrecisionExhausted("image descent did not terminate within the precision budget")


def _target_candidates(ctx: FieldContext):
    out = [Fraction(0), Fraction(1)]
    for a in ctx.residue_field.elements():
        if a.is_zero() or a == ctx.residue_field.one:
            continue
        out.append(_exact_lift(ctx, a))
    out.extend(Fraction(1, ctx.prime ** j) for j in range(1, 5))
    return out


def _image_by_target_conjugation(phi: RationalMap, zeta: Type2):
    ctx = zeta.ctx
    for c in _target_candidates(ctx):
        mu = MobiusMap(Fraction(0), Fraction(1), Fraction(1), -c)
        try:
            img = _image_pole_free(transform(phi, left=mu), zeta)
        except PrecisionExhausted:
            continue
        if img is not None:
            return mobius_point(mu.inverse(), img, ctx)
    return _image_by_center_search(phi, zeta)


def _seminorm_gap(phi: RationalMap, zeta: Type2):
    """beta -> log|phi - beta|_zeta."""
    ctx = zeta.ctx
    n, d = phi.polys()
    nt, dt = to_tower(n, ctx), to_tower(d, ctx)
    dlog = seminorm(d, zeta)

    def gap(beta):
        if _is_exact(beta):
            return seminorm(n - d * beta, zeta) - dlog
        return seminorm(nt - dt * beta, zeta) - dlog

    return gap


def _improve(gap, beta, cur, ctx):
    """A center strictly closer to the image center, or None."""
    step = scale_by_valuation(ctx, cur)
    for a in ctx.residue_field.elements():
        if a.is_zero():
            continue
        cand = _add(beta, _mul(step, _exact_lift(ctx, a)))
        g = gap(cand)
        if g < cur:
            return cand, g
    return None


def _image_by_center_search(phi: RationalMap, zeta: Type2):
    """Image as zeta_{b,s}, using log|phi - beta|_zeta = max(log|beta - b|, s) for every beta.

    The center is refined one residue digit at a time; each accepted digit
    strictly lowers the seminorm until it bottoms out at s. The image is
    Galois stable, so a search that stalls at a radius in the value group has
    reached s.
    """
    ctx = zeta.ctx
    gap = _seminorm_gap(phi, zeta)
    beta = Fraction(0)
    cur = gap(beta)
    for _ in range(64 * ctx.ram_index * ctx.precision):
        try:
            nxt = _improve(gap, beta, cur, ctx)
        except ValueError:
            _certify_outside_value_group(phi, zeta, beta, cur)
            return Type2(beta, cur, ctx)
        if nxt is None:
            return Type2(beta, cur, ctx)
        beta, cur = nxt
    raise PrecisionExhausted(f"center search for the image of {zeta} did not settle")


def _certify_outside_value_group(phi, zeta, beta, cur):
    """One search step in the ramified extension where cur becomes a valuation."""
    ctx = zeta.ctx
    if phi.exact is None or not (_is_exact(beta) and _is_exact(zeta.center)):
        raise InsufficientTower(f"cannot certify the image of {zeta} in {ctx}")
    w = ctx.ram_index * Fraction(cur * ctx.ram_index).denominator
    big = ctx.with_ram_index(w)
    n, d = phi.exact
    phi2 = RationalMap.from_rational(big, n.coeffs, d.coeffs)
    zeta2 = Type2(zeta.center, zeta.rlog, big)
    if _improve(_seminorm_gap(phi2, zeta2), beta, cur, big) is not None:
        raise InsufficientTower(f"image of {zeta} has no center in {ctx}")


def image_of_point(phi: RationalMap, pt):
    """phi(pt) for a classical or type-2 point."""
    if isinstance(pt, Type1):
        if not (pt.value is INFTY or _is_numeric(pt.value)):
            raise PreconditionError("image of a symbolic classical point")
        return Type1(phi(pt.value))
    img = _image_pole_free(phi, pt)
    if img is not None:
        return img
    if (pt.rlog * pt.ctx.ram_index).denominator == 1:
        try:
            return _image_by_descent(phi, pt)
        except PrecisionExhausted:
            pass
    return _image_by_target_conjugation(phi, pt)


def is_fixed_point(phi: RationalMap, pt) -> bool:
    return image_of_point(phi, pt) == pt


# --- multiplicities ---

def conjugate_to_gauss(phi: RationalMap, zeta: Type2):
    """(psi, xi): xi = phi(zeta) and psi = tau_xi^-1 o phi o tau_zeta, so psi fixes the Gauss point."""
    xi = image_of_point(phi, zeta)
    tz, tx = canonical_chart(zeta), canonical_chart(xi)
    return transform(phi, left=tx.inverse(), right=tz), xi


def multiplicity_at(phi: RationalMap, zeta: Type2) -> int:
    psi, _ = conjugate_to_gauss(phi, zeta)
    return reduce(psi).degree


def directional_multiplicity(phi: RationalMap, zeta: Type2, label) -> int:
    if isinstance(label, Direction):
        label = label.label
    psi, _ = conjugate_to_gauss(phi, zeta)
    return reduce(psi).local_multiplicity(label)


def tangent_map_at(phi: RationalMap, zeta: Type2) -> ResidualMap:
    """Residual map in the canonical chart at a fixed type-2 point."""
    psi, xi = conjugate_to_gauss(phi, zeta)
    if xi != zeta:
        raise NotFixed(f"{zeta} maps to {xi}")
    return reduce(psi)


def tangent_image(phi: RationalMap, zeta: Type2, label):
    """(xi, label at xi) of the direction image T_zeta phi."""
    psi, xi = conjugate_to_gauss(phi, zeta)
    return xi, reduce(psi)(label)


def roots_in_direction(f: Poly, zeta: Type2, label, degree: int | None = None) -> int:
    """Number of roots of f (counted on P^1 with formal degree) in the open disk of a direction."""
    ctx = zeta.ctx
    tau = canonical_chart(zeta)
    g = transform_poly(f, tau, ctx)
    red = reduce_poly(normalize_poly(g, ctx), ctx)
    if label is INFTY:
        return (f.degree if degree is None else degree) - red.degree
    from .poly import embed_poly

    return taylor_shift(embed_poly(red, label.field), label).order_at_zero()


def transform_poly(f: Poly, tau: MobiusMap, ctx) -> Poly:
    """f(tau(z)) for an affine tau."""
    if f.ring == QQ and tau.is_exact:
        lin = Poly([Fraction(tau.b), Fraction(tau.a)], QQ)
    else:
        f = to_tower(f, ctx)
        lin = Poly([ctx.coerce(tau.b), ctx.coerce(tau.a)], ctx)
    return f.compose(lin)


def classify_direction(phi: RationalMap, zeta: Type2, label) -> str:
    """'good' or 'bad' for the direction with the given label at zeta."""
    if isinstance(label, Direction):
        label = label.label
    ctx = zeta.ctx
    psi, _ = conjugate_to_gauss(phi, zeta)
    w = reduce(psi)(label)
    F = ctx.residue_field
    test = next(a for a in F.elements() if w is INFTY or w != (a if w.field == F else w.field.embed(a)))
    c = _exact_lift(ctx, test)
    n, d = psi.polys()
    g = n - d * (Fraction(c) if n.ring == QQ else ctx.coerce(c))
    gauss = Type2.gauss(ctx)
    count = roots_in_direction(g, gauss, label, degree=psi.degree)
    return "bad" if count > 0 else "good"
