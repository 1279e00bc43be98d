"""Decision procedures for the fixed point locus of a map in good-reduction position."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .berkovich import (
    Type1,
    Type2,
    apply_flip,
    big_metric,
    canonical_chart,
    direction_toward,
    expansion,
    image_of_point,
    is_fixed_point,
    point_in_direction,
    tangent_map_at,
    _add,
    _exact_lift,
    _mul,
)
from .errors import (
    BerkError,
    FactorizationUnsupported,
    InsufficientTower,
    NotFixed,
    NotPotentialGoodReduction,
    PrecisionExhausted,
    PreconditionError,
    SearchExhausted,
)
from .finite_field import INFTY
from .newton import newton_polygon
from .padic import INF
from .poly import QQ, Poly, embed_poly, squarefree_part, sylvester_resultant, taylor_shift

from .rational_map import (
    ALL_POINTS,
    MobiusMap,
    RationalMap,
    _wronskian,
    classify_type1_fixed_points,
    conjugate,
    fixed_point_polynomial,
    is_good_reduction,
    locate_type1_fixed_points,
    normalize,
    normalize_poly,
    pull_back_map,
    reduce,
    reduce_poly,
    residual_fixed_data,
    scale_by_valuation,
    squarefree_fixed_polynomial,
    to_tower,
    val,
)


@dataclass(frozen=True)
class ResidualFixed:
    label: object
    fixed_multiplicity: int
    local_multiplicity: int

    @property
    def critical(self) -> bool:
        return self.local_multiplicity >= 2


@dataclass
class Verdict:
    value: bool
    evidence: list = field(default_factory=list)

    def __bool__(self):
        return self.value


@dataclass
class End:
    """An end or interior marker of the Gauss component."""

    kind: str  # interior-identity | indifferent | translation | undetected
    point: object = None
    direction: object = None
    detail: str = ""


@dataclass
class ComponentCensus:
    count: int
    noncritical_fixed: list = field(default_factory=list)
    per_direction: list = field(default_factory=list)  # (label, number of isolated type-1 points)
    isolated_points: list = field(default_factory=list)
    ends: list = field(default_factory=list)


@dataclass
class PGRResult:
    """Outcome of the potential good reduction search.

    When found, ``conjugacy`` M satisfies: M o phi o M^-1 has good
    reduction and ``point`` = M^-1(Gauss) is the totally ramified fixed point.
    """

    found: bool
    conjugacy: MobiusMap | None = None
    point: Type2 | None = None
    candidates_tried: int = 0
    # ramification index a good-reduction chart would need, when the minimum sits off the value group
    needs_ramification: int | None = None


# --- residual data ---

def residual_fixed(phi: RationalMap):
    """(field, [ResidualFixed]) for a map in good-reduction position."""
    _require_good(phi)
    data = residual_fixed_data(reduce(phi))
    if data is ALL_POINTS:
        raise PreconditionError("identity reduction is not good reduction in degree >= 2")
    K, pts = data
    return K, [ResidualFixed(a, m, lm) for a, m, lm in pts]


def _require_good(phi: RationalMap):
    if phi.degree < 2:
        raise PreconditionError("degree must be at least 2")
    if not is_good_reduction(phi):
        raise NotPotentialGoodReduction("map is not in good-reduction position")


def verdict_connected(phi: RationalMap) -> Verdict:
    """Connected iff no residual fixed point is critical."""
    _, recs = residual_fixed(phi)
    bad = [r.label for r in recs if r.critical]
    return Verdict(not bad, bad)


def verdict_finite(phi: RationalMap) -> Verdict:
    """Finite iff every residual fixed point is critical."""
    _, recs = residual_fixed(phi)
    noncrit = [r.label for r in recs if not r.critical]
    return Verdict(not noncrit, noncrit)


def _direction_point_counts(phi: RationalMap, K, labels):
    """Distinct type-1 fixed points in each residue direction (labels in K or INFTY)."""
    Psf = squarefree_fixed_polynomial(phi)
    _, inf_fixed = fixed_point_polynomial(phi)
    ctx = phi.ctx
    if Psf.degree >= 1:
        red = reduce_poly(normalize_poly(to_tower(Psf, ctx), ctx), ctx)
    else:
        red = Poly([ctx.residue_field.one], ctx.residue_field)
    redK = embed_poly(red, K)
    out = []
    for a in labels:
        if a is INFTY:
            n = max(Psf.degree, 0) - red.degree + (1 if inf_fixed else 0)
        else:
            n = taylor_shift(redK, a).order_at_zero()
        out.append((a, n))
    return out


def component_census(phi: RationalMap, with_ends: bool = True) -> ComponentCensus:
    K, recs = residual_fixed(phi)
    crit = [r.label for r in recs if r.critical]
    counts = _direction_point_counts(phi, K, crit)
    count = 1 + sum(n for _, n in counts)
    if count > phi.degree + 2:
        raise AssertionError(f"census {count} exceeds degree + 2 = {phi.degree + 2}")
    census = ComponentCensus(count, [r.label for r in recs if not r.critical], counts)
    census.isolated_points = isolated_fixed_points(phi, counts)
    if with_ends:
        census.ends = classify_component_ends(phi)
    return census


def _type1_records(phi: RationalMap):
    """Classified type-1 fixed points, falling back to unclassified records."""
    try:
        return classify_type1_fixed_points(phi)
    except FactorizationUnsupported:
        return locate_type1_fixed_points(phi)


def isolated_fixed_points(phi: RationalMap, counts=None) -> list:
    """Type-1 fixed points in residually fixed critical directions."""
    if counts is None:
        K, recs = residual_fixed(phi)
        counts = _direction_point_counts(phi, K, [r.label for r in recs if r.critical])
    r_map = reduce(phi)
    d = phi.degree
    for a, n in counts:
        if r_map.local_multiplicity(a) == d and n != 1:
            raise AssertionError(f"totally ramified direction {a} holds {n} fixed points, expected exactly one")
    out = []
    for rec in _type1_records(phi):
        if r_map.local_multiplicity(rec.direction) >= 2:
            out.append(rec)
    return out


# --- escape witnesses ---

@dataclass
class Witness:
    direction: object
    point: Type2
    image: Type2
    grid_step: Fraction
    grid_depth: int


def lemma31_witness(phi: RationalMap, label, step: Fraction | None = None, depth: int = 12) -> Witness:
    """A point beta in the direction with phi(beta) != beta and beta on [Gauss, phi(beta)]."""
    _require_good(phi)
    ctx = phi.ctx
    r_map = reduce(phi)
    if r_map(label) != label:
        raise PreconditionError("direction is not residually fixed")
    if r_map.local_multiplicity(label) < 2:
        raise PreconditionError("direction is not residually critical")
    step = Fraction(1, 2 * ctx.ram_index) if step is None else Fraction(step)
    gauss = Type2.gauss(ctx)
    for j in range(1, depth + 1):
        rl = j * step if label is INFTY else -j * step
        beta = point_in_direction(gauss, label, rl)
        img = image_of_point(phi, beta)
        if isinstance(img, Type1) or img == beta:
            continue
        if big_metric(gauss, img) == big_metric(gauss, beta) + big_metric(beta, img):
            return Witness(label, beta, img, step, depth)
    raise SearchExhausted(f"no witness in direction {label} within {depth} grid steps of {step}")


# --- potential good reduction ---

def cluster_nodes(f: Poly, ctx, depth: int = 4, limit: int = 64) -> list:
    """Type-2 branch points of the root cluster tree of f.

    Starting from 0, each Newton polygon slope of f(c + t) gives a disk
    around c; a disk is kept when the roots inside it split into at least
    two residue directions. Residue classes defined over the base residue
    field are explored recursively.
    """
    nodes, seen = [], []
    todo = [(Fraction(0), 0)]
    while todo and len(nodes) < limit:
        c, lvl = todo.pop(0)
        g = expansion(f, c, ctx)
        vals = [INF if _zero_coeff(x) else val(x, ctx) for x in g.coeffs]
        poly = newton_polygon(vals)
        for s in sorted(set(v for v in poly.root_valuations() if v != INF)):
            node = Type2(c, -s, ctx)
            if node in seen:
                continue
            seen.append(node)
            if (s * ctx.ram_index).denominator != 1:
                nodes.append(node)
                continue
            tau = canonical_chart(node)
            h = to_tower(g, ctx).compose(Poly([ctx.zero, ctx.coerce(tau.a)], ctx))
            red = reduce_poly(normalize_poly(h, ctx), ctx)
            if red.degree >= 1 and squarefree_part(red).degree >= 2:
                nodes.append(node)
            if lvl >= depth or red.degree < 1:
                continue
            for a in ctx.residue_field.elements():
                if not a.is_zero() and taylor_shift(red, a).order_at_zero() > 0:
                    todo.append((_add(c, _mul(tau.a, _exact_lift(ctx, a))), lvl + 1))
    return nodes


def _zero_coeff(x) -> bool:
    # inexact zeros count as zero here: candidates are certified afterwards
    return x == 0 if isinstance(x, Fraction) else x.is_zero()


def _candidate_points(phi: RationalMap) -> list:
    ctx = phi.ctx
    n, d = phi.polys()
    P, _ = fixed_point_polynomial(phi)
    W = _wronskian(n, d)
    if n.ring == QQ:
        prod = squarefree_part(P) * squarefree_part(W) if not W.is_zero() else squarefree_part(P)
    else:
        prod = P * W if not W.is_zero() else P
    cands = list(cluster_nodes(prod, ctx))
    flipped = conjugate(phi, MobiusMap.flip())
    fn, fd = flipped.polys()
    fP, _ = fixed_point_polynomial(flipped)
    fW = _wronskian(fn, fd)
    fprod = fP * fW if not fW.is_zero() else fP
    for node in cluster_nodes(fprod, ctx):
        cands.append(apply_flip(node, ctx))
    out = []
    for c in cands:
        if c not in out:
            out.append(c)
    frontier = list(out)
    for _ in range(3):
        nxt = []
        for c in frontier:
            try:
                img = image_of_point(phi, c)
            except BerkError:
                continue
            if isinstance(img, Type2) and img not in out:
                out.append(img)
                nxt.append(img)
        frontier = nxt
    return out


def _ray_terms(phi: RationalMap, c):
    """(valuation, exponent) terms whose minimum at t is the coefficient minimum of the chart z -> c + s z, v(s) = t."""
    ctx = phi.ctx
    n, d = phi.polys()
    if not (n.ring == QQ and isinstance(c, Fraction)):
        n, d, c = to_tower(n, ctx), to_tower(d, ctx), ctx.coerce(c)
    a = taylor_shift(n - d * c, c)
    b = taylor_shift(d, c)
    terms = []
    for j, x in enumerate(a.coeffs):
        if not _zero_coeff(x):
            terms.append((val(x, ctx), j))
    for j, x in enumerate(b.coeffs):
        if not _zero_coeff(x):
            terms.append((val(x, ctx), j + 1))
    return terms


def _ray_value(phi: RationalMap, res_val, terms, t):
    d = phi.degree
    return res_val + (d * d + d) * t - 2 * d * min(v + e * t for v, e in terms)


def _ray_minimum(phi: RationalMap, res_val, c, t0, outward: bool):
    """Exact minimum of the normalized resultant valuation along a ray of charts centered at c.

    Returns (value, t) with t >= t0 (t <= t0 when outward). The function is
    res_val + (d^2 + d) t - 2d min(v + e t), convex and piecewise affine, so
    its minimum sits at t0 or at a tie between two terms.
    """
    terms = _ray_terms(phi, c)
    ts = {Fraction(t0)}
    for i, (v1, e1) in enumerate(terms):
        for v2, e2 in terms[i + 1:]:
            if e1 != e2:
                t = Fraction(v2 - v1) / (e1 - e2)
                if t != t0 and (t < t0) == outward:
                    ts.add(t)
    best = min(ts, key=lambda t: (_ray_value(phi, res_val, terms, t), abs(t - t0)))
    return _ray_value(phi, res_val, terms, best), best, terms


def resultant_descent(phi: RationalMap, max_steps: int = 256):
    """Walk from the Gauss point toward the minimum of the normalized resultant valuation.

    The valuation vanishes exactly at charts of good reduction and is convex
    along paths, so at most one direction descends. Returns
    (point, value, ramification): ramification is the index a zero at a
    radius outside the value group would need, else None.
    """
    ctx = phi.ctx
    n, d = phi.polys()
    D = phi.degree
    ring = QQ if n.ring == QQ else ctx
    if ring is ctx:
        n, d = to_tower(n, ctx), to_tower(d, ctx)
    res_val = val(sylvester_resultant(list(n.coeffs), D, list(d.coeffs), D, ring), ctx)
    w = ctx.ram_index
    center, t = Fraction(0), Fraction(0)
    cur = _ray_value(phi, res_val, _ray_terms(phi, center), t)
    for _ in range(max_steps):
        if cur == 0:
            return Type2(center, -t, ctx), cur, None
        s = scale_by_valuation(ctx, -t)
        moves = [(center, True)] + [
            (_add(center, _mul(s, _exact_lift(ctx, a))), False) for a in ctx.residue_field.elements()
        ]
        step = None
        for c, outward in moves:
            value, t_new, terms = _ray_minimum(phi, res_val, c, t, outward)
            if value < cur:
                step = (c, outward, value, t_new, terms)
                break
        if step is None:
            return Type2(center, -t, ctx), cur, None
        c, outward, value, t_new, terms = step
        if (t_new * w).denominator != 1:
            if value == 0:
                return Type2(c, -t_new, ctx), value, w * (t_new * w).denominator
            # stay on radii in the value group: the better neighbour on the ray
            near = [Fraction(math.floor(t_new * w), w), Fraction(math.ceil(t_new * w), w)]
            near = [x for x in near if x == t or (x < t) == outward]
            t_new = min(near, key=lambda x: _ray_value(phi, res_val, terms, x))
            value = _ray_value(phi, res_val, terms, t_new)
            if value >= cur:
                return Type2(center, -t, ctx), cur, None
        center, t, cur = c, t_new, value
    raise SearchExhausted("resultant descent did not settle")


def _test_candidate(phi: RationalMap, xi: Type2):
    if (xi.rlog * phi.ctx.ram_index).denominator != 1:
        return None
    A = canonical_chart(xi)
    psi = pull_back_map(phi, A)
    if is_good_reduction(psi):
        return PGRResult(True, A.inverse(), xi)
    return None


def find_potential_good_reduction(phi: RationalMap) -> PGRResult:
    phi = phi if phi.normalized else normalize(phi)
    gauss = Type2.gauss(phi.ctx)
    if is_good_reduction(phi):
        return PGRResult(True, MobiusMap.identity(), gauss, 0)
    tried = 0
    try:
        xi, value, ram = resultant_descent(phi)
    except (PrecisionExhausted, InsufficientTower, SearchExhausted):
        xi, value, ram = None, None, None
    if ram is not None:
        return PGRResult(False, point=xi, needs_ramification=ram)
    if value == 0:
        tried += 1
        try:
            res = _test_candidate(phi, xi)
        except (PrecisionExhausted, InsufficientTower):
            res = None
        if res is not None:
            res.candidates_tried = tried
            return res
    for xi in _candidate_points(phi):
        tried += 1
        try:
            res = _test_candidate(phi, xi)
        except (PrecisionExhausted, InsufficientTower):
            continue
        if res is not None:
            res.candidates_tried = tried
            return res
    return PGRResult(False, candidates_tried=tried)


def all_totally_ramified_candidates(phi: RationalMap) -> list:
    """Every candidate that certifies as a totally ramified fixed point (for uniqueness checks)."""
    phi = phi if phi.normalized else normalize(phi)
    cands = [Type2.gauss(phi.ctx)] + _candidate_points(phi)
    try:
        cands.append(resultant_descent(phi)[0])
    except (PrecisionExhausted, InsufficientTower, SearchExhausted):
        pass
    found = []
    for xi in cands:
        try:
            res = _test_candidate(phi, xi)
        except (PrecisionExhausted, InsufficientTower):
            continue
        if res is not None and xi not in found:
            found.append(xi)
    return found


def good_position(phi: RationalMap):
    """(psi, M, xi) with psi = M o phi o M^-1 of good reduction; raises when inconclusive."""
    res = find_potential_good_reduction(phi)
    if res.needs_ramification is not None:
        raise NotPotentialGoodReduction(
            f"good reduction is reached only at {res.point}, which needs ramification index {res.needs_ramification}"
        )
    if not res.found:
        raise NotPotentialGoodReduction(
            f"no totally ramified type-2 fixed point among {res.candidates_tried} candidates"
        )
    psi = pull_back_map(phi, res.conjugacy.inverse()) if res.conjugacy != MobiusMap.identity() else normalize(phi)
    return psi, res.conjugacy, res.point


# --- component ends ---

def classify_component_ends(phi: RationalMap) -> list:
    """Interior identity-tangent points, indifferent type-1 ends, translation ends, undetected ends."""
    _require_good(phi)
    ctx = phi.ctx
    r_map = reduce(phi)
    K, recs = residual_fixed(phi)
    noncrit = [r.label for r in recs if not r.critical]
    ends = []
    P = squarefree_fixed_polynomial(phi)
    gauss = Type2.gauss(ctx)
    nodes = []
    if P.degree >= 1:
        nodes = [z for z in cluster_nodes(P, ctx) if z != gauss]
    _, inf_fixed = fixed_point_polynomial(phi)
    flipped = conjugate(phi, MobiusMap.flip())
    fP, _ = fixed_point_polynomial(flipped)
    if fP.degree >= 1:
        for z in cluster_nodes(squarefree_part(fP) if fP.ring == QQ else fP, ctx):
            z = apply_flip(z, ctx)
            if z != gauss and z not in nodes:
                nodes.append(z)
    touched = set()
    for z in nodes:
        if (z.rlog * ctx.ram_index).denominator != 1:
            continue  # no tower chart, so no tangent map to inspect
        lab = _gauss_label(z)
        if lab is None or not _is_noncritical_fixed(r_map, lab):
            continue
        try:
            if not is_fixed_point(phi, z):
                continue
            tm = tangent_map_at(phi, z)
        except (NotFixed, InsufficientTower, PrecisionExhausted):
            continue
        if tm.is_identity():
            ends.append(End("interior-identity", z, lab, "tangent map is the identity"))
        elif tm.degree == 1:
            fx = tm.fixed_points()
            if fx is not ALL_POINTS and len(fx[1]) == 1:
                ends.append(End("translation", z, lab, "tangent map is a translation"))
                touched.add(_label_key(lab))
    for rec in _type1_records(phi):
        lab = rec.direction
        if _is_noncritical_fixed(r_map, lab):
            ends.append(End("indifferent", rec, lab, rec.cls or "unclassified"))
            touched.add(_label_key(lab))
    for lab in noncrit:
        if _label_key(lab) not in touched:
            ends.append(End("undetected", None, lab, "undetected (possibly type 4)"))
    return ends


def _label_key(lab):
    return "inf" if lab is INFTY else (lab.field.degree, tuple(lab.coeffs))


def _gauss_label(z: Type2):
    """Direction at the Gauss point containing z (None for the Gauss point itself)."""
    return direction_toward(Type2.gauss(z.ctx), z)


def _is_noncritical_fixed(r_map, lab) -> bool:
    if r_map(lab) != lab:
        return False
    return r_map.local_multiplicity(lab) == 1


# --- full analysis ---

@dataclass
class LocusReport:
    map: RationalMap
    degree: int
    good_reduction: bool
    conjugacy: MobiusMap
    totally_ramified_point: Type2
    position_map: RationalMap
    residual_field: object
    residual_fixed: list
    residual_critical: object
    connected: Verdict
    finite: Verdict
    census: ComponentCensus
    type1: list
    witnesses: list = field(default_factory=list)
    oracle_log: list = field(default_factory=list)


def analyze(phi: RationalMap, witnesses: bool = True) -> LocusReport:
    phi = phi if phi.normalized else normalize(phi)
    if phi.degree < 2:
        raise PreconditionError("degree must be at least 2")
    good = is_good_reduction(phi)
    psi, M, xi = good_position(phi)
    K, recs = residual_fixed(psi)
    crit = reduce(psi).critical_points()
    connected = verdict_connected(psi)
    finite = verdict_finite(psi)
    census = component_census(psi)
    type1 = _type1_records(psi)
    report = LocusReport(phi, phi.degree, good, M, xi, psi, K, recs, crit, connected, finite, census, type1)
    if witnesses:
        for r in recs:
            if r.critical:
                try:
                    report.witnesses.append(lemma31_witness(psi, r.label))
                except (SearchExhausted, InsufficientTower):
                    pass
    return report
