"""Brute-force sampling oracle: checks verdicts against fixedness of grid points."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .berkovich import (
    Type1,
    Type2,
    _exact_lift,
    _logabs,
    big_metric,
    expansion,
    image_of_point,
    multiplicity_at,
)
from .errors import OracleMismatch
from .finite_field import INFTY
from .locus import residual_fixed, verdict_connected, verdict_finite
from .padic import INF
from .rational_map import MobiusMap, RationalMap, conjugate, reduce, transform


@dataclass(frozen=True)
class GridSpec:
    step: Fraction | None = None  # default 1/(2w)
    depth: int = 6
    extra_directions: int = 2


@dataclass
class Sample:
    direction: str
    center: object
    rlog: Fraction
    fixed: bool
    image: object
    multiplicity: int | None = None


@dataclass
class OracleReport:
    samples: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    def fixed_samples(self, direction: str | None = None) -> list:
        return [s for s in self.samples if s.fixed and (direction is None or s.direction == direction)]


def _base_label(ctx, label):
    """The label as a base residue field element (None if it is not defined over it)."""
    if label is INFTY:
        return INFTY
    F = ctx.residue_field
    if label.field == F:
        return label
    for a in F.elements():
        if label.field.embed(a) == label:
            return a
    return None


def _label_str(label) -> str:
    return "inf" if label is INFTY else str(label)


def _dominant(coeffs, ctx):
    """(index dominating just below radius 1, largest kink rlog < 0) for sum c_j t^j."""
    v = {j: -_logabs(c, ctx) for j, c in enumerate(coeffs) if _logabs(c, ctx) != -INF}
    if not v:
        return None, Fraction(0)
    top = min(v.values())
    m = min(j for j, vj in v.items() if vj == top)
    kink = -INF
    for j, vj in v.items():
        if j < m:
            kink = max(kink, Fraction(v[m] - vj, m - j))
    return m, kink


def _first_breakpoint(psi: RationalMap, center, m: int):
    """Largest rlog < 0 where the image radius along the arc to center stops scaling by m.

    Both the numerator of psi - psi(center) and the denominator may change
    their dominant term; the later of the two kinks bounds the linear piece.
    """
    ctx = psi.ctx
    if reduce(psi)(_residue_of(center, ctx)) is INFTY:
        psi = transform(psi, left=MobiusMap.flip())
    n, d = psi.polys()
    ne, de = expansion(n, center, ctx), expansion(d, center, ctx)
    if _logabs(de[0], ctx) == -INF:
        return Fraction(0)
    h = ne - de * (ne[0] / de[0])
    mh, kh = _dominant(h.coeffs, ctx)
    md, kd = _dominant(de.coeffs, ctx)
    if mh is None or mh - md != m:
        raise OracleMismatch(f"slope {mh}-{md} at the Gauss point disagrees with multiplicity {m}", None)
    return max(kh, kd)


def _residue_of(c, ctx):
    return ctx.coerce(c).residue() if c != 0 else ctx.residue_field.zero


def oracle_verify(phi: RationalMap, grid: GridSpec | None = None) -> OracleReport:
    """Sample arcs from the Gauss point and cross-check every invariant; raises OracleMismatch."""
    grid = grid or GridSpec()
    ctx = phi.ctx
    step = Fraction(1, 2 * ctx.ram_index) if grid.step is None else Fraction(grid.step)
    report = OracleReport()
    gauss = Type2.gauss(ctx)
    if image_of_point(phi, gauss) != gauss:
        raise OracleMismatch("Gauss point is not fixed", gauss)
    K, recs = residual_fixed(phi)
    connected, finite = verdict_connected(phi), verdict_finite(phi)
    flipped = conjugate(phi, MobiusMap.flip())
    rational_targets = _rational_fixed_points(phi)

    plan = []  # (map, label in this chart, original label, critical, fixed, centers)
    seen = set()
    for r in recs:
        lab = _base_label(ctx, r.label)
        if lab is None:
            report.skipped.append(f"direction {r.label} is not defined over the base residue field")
            continue
        seen.add(_label_str(lab))
        plan.append((lab, r.critical, True))
    extra = 0
    for lab in list(ctx.residue_field.elements()) + [INFTY]:
        if extra >= grid.extra_directions:
            break
        if _label_str(lab) in seen:
            continue
        plan.append((lab, False, False))
        extra += 1

    for lab, critical, is_fixed in plan:
        name = _label_str(lab)
        psi, chart_label = (flipped, ctx.residue_field.zero) if lab is INFTY else (phi, lab)
        targets = [a for a in rational_targets.get(name, [])] or [None]
        m = reduce(psi).local_multiplicity(chart_label)
        for target in targets:
            center = target if target is not None else _exact_lift(ctx, chart_label)
            toward_fixed_point = target is not None
            arc = [gauss] + [Type2(center, -j * step, ctx) for j in range(1, grid.depth + 1)]
            images = [gauss] + [image_of_point(psi, z) for z in arc[1:]]
            fixed = [True] + [img == z for z, img in zip(arc[1:], images[1:])]
            for z, img, fx in zip(arc[1:], images[1:], fixed[1:]):
                s = Sample(name, _chart_back(z, lab, ctx).center, z.rlog, fx, img)
                report.samples.append(s)
            label = f"direction {name}" + (f" toward {target if lab is not INFTY else _inv(target)}" if toward_fixed_point else "")
            _check_fixedness(report, label, arc, fixed, critical, is_fixed, toward_fixed_point, finite)
            if is_fixed:
                _check_scaling(report, label, psi, center, m, arc, images)
                _check_monotone(report, label, psi, arc)
    if bool(connected) != all(not r.critical for r in recs):
        raise OracleMismatch("connectedness verdict disagrees with residual data", None)
    return report


def _inv(a):
    return INFTY if a == 0 else 1 / a


def _chart_back(z: Type2, lab, ctx):
    if lab is INFTY:
        from .berkovich import apply_flip

        return apply_flip(z, ctx)
    return z


def _rational_fixed_points(phi: RationalMap) -> dict:
    """Exact rational fixed points grouped by residue direction, in the chart used for sampling."""
    out = {}
    if phi.exact is None:
        return out
    from .rational_map import fixed_point_polynomial, squarefree_part
    from .poly import qq_factor

    P, inf_fixed = fixed_point_polynomial(phi)
    ctx = phi.ctx
    roots = []
    if P.degree >= 1:
        for f, _ in qq_factor(squarefree_part(P)):
            if f.degree == 1:
                roots.append(-f[0] / f[1])
    for a in roots:
        if a != 0 and ctx.coerce(a).valuation() < 0:
            out.setdefault("inf", []).append(1 / a)
        else:
            out.setdefault(_label_str(_residue_of(a, ctx)), []).append(a)
    if inf_fixed:
        out.setdefault("inf", []).append(Fraction(0))
    return out


def _check_fixedness(report, label, arc, fixed, critical, is_fixed, toward, finite):
    if not is_fixed:
        if any(fixed[1:]):
            raise OracleMismatch(f"fixed sample in non-fixed {label}", arc[fixed.index(True, 1)])
        report.checks.append(f"{label}: no fixed samples (non-fixed direction)")
        return
    if critical:
        if any(fixed[1:]):
            raise OracleMismatch(f"fixed type-2 sample in critical {label}", arc[fixed.index(True, 1)])
        report.checks.append(f"{label}: no fixed samples (critical direction)")
        return
    if finite:
        raise OracleMismatch(f"finite verdict but non-critical fixed {label}", arc[0])
    if toward and not all(fixed):
        raise OracleMismatch(f"arc toward an indifferent fixed point not fixed in {label}", arc[fixed.index(False)])
    if not fixed[1]:
        raise OracleMismatch(f"first sample not fixed in non-critical {label}", arc[1])
    first_bad = fixed.index(False) if False in fixed else len(fixed)
    if any(fixed[first_bad:]):
        raise OracleMismatch(f"fixed samples are not an initial segment in {label}", arc[first_bad])
    report.checks.append(f"{label}: fixed samples form an initial segment of length {first_bad - 1}")


def _check_scaling(report, label, psi, center, m, arc, images):
    r_star = _first_breakpoint(psi, center, m)
    n = 0
    for i in range(len(arc) - 1):
        x, y = arc[i], arc[i + 1]
        if y.rlog < r_star:
            break
        fx, fy = images[i], images[i + 1]
        if isinstance(fx, Type1) or isinstance(fy, Type1):
            continue
        if big_metric(fx, fy) != m * big_metric(x, y):
            raise OracleMismatch(f"local scaling by {m} fails in {label}", y)
        n += 1
    report.checks.append(f"{label}: scaling by {m} holds on {n} sampled segments")


def _check_monotone(report, label, psi, arc):
    w = psi.ctx.ram_index
    mults = []
    for z in arc:
        if (z.rlog * w).denominator == 1:
            mults.append(multiplicity_at(psi, z))
    for a, b in zip(mults, mults[1:]):
        if a < b:
            raise OracleMismatch(f"multiplicity increases away from the Gauss point in {label}", arc[-1])
    ram = [m >= 2 for m in mults]
    if True in ram and False in ram[: len(ram) - ram[::-1].index(True)]:
        raise OracleMismatch(f"ramified samples are not an initial segment in {label}", arc[-1])
    report.checks.append(f"{label}: multiplicities {mults} non-increasing")
