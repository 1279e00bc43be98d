"""JSON, text and DOT renderings. Rationals are always strings "num/den"."""

from __future__ import annotations

import json
from fractions import Fraction

from .berkovich import Type1, Type2
from .finite_field import FFElem, INFTY
from .locus import ComponentCensus, End, LocusReport, PGRResult, ResidualFixed, Witness
from .oracle import OracleReport
from .padic import INF, PadicElem
from .parse import format_poly
from .poly import QQ, Poly
from .rational_map import ALL_POINTS, MobiusMap, RationalMap, ResidualMap, Type1FixedPoint

SCHEMA = "berklocus/1"


def rat(x) -> str:
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def elem(x):
    if x is None:
        return None
    if x is INFTY:
        return "inf"
    if isinstance(x, (int, Fraction)):
        return rat(x)
    if isinstance(x, PadicElem):
        if x.is_exact_zero():
            return "0/1"
        if x.is_inexact_zero():
            return f"O(pi^{x.absprec})"
        digits = " ".join(str(d) for d in x.digits()[:8])
        return f"pi^{x.val}*[{digits}...]"
    if isinstance(x, FFElem):
        return str(x)
    return str(x)


def poly(f: Poly) -> str:
    if f.ring == QQ:
        return format_poly(f)
    return str(f)


def coeffs(f: Poly) -> list:
    return [elem(c) for c in f.coeffs]


def point(pt):
    if isinstance(pt, Type2):
        return {"type": 2, "center": elem(pt.center), "rlog": rat(pt.rlog)}
    if isinstance(pt, Type1):
        return {"type": 1, "value": elem(pt.value)}
    return None


def mobius(m: MobiusMap):
    return {k: elem(getattr(m, k)) for k in "abcd"}


def rational_map(phi: RationalMap):
    n, d = phi.polys()
    return {"numerator": coeffs(n), "denominator": coeffs(d), "text": f"({poly(n)})/({poly(d)})", "degree": phi.degree}


def residual_map(r: ResidualMap):
    return {
        "field": str(r.field),
        "numerator": coeffs(r.num),
        "denominator": coeffs(r.den),
        "degree": r.degree,
        "constant": r.constant,
        "identity": r.is_identity(),
    }


def labelled(points):
    if points is ALL_POINTS:
        return "all"
    field, pts = points
    return {"field": str(field), "points": [{"label": elem(a), "multiplicity": m} for a, m in pts]}


def type1(rec: Type1FixedPoint):
    return {
        "value": elem(rec.value),
        "factor": poly(rec.factor) if rec.factor is not None else None,
        "valuation": rat(rec.valuation),
        "direction": elem(rec.direction),
        "multiplier_valuation": None if rec.multiplier_valuation is None else rat(rec.multiplier_valuation),
        "class": rec.cls,
    }


def residual_fixed(r: ResidualFixed):
    return {
        "label": elem(r.label),
        "fixed_multiplicity": r.fixed_multiplicity,
        "local_multiplicity": r.local_multiplicity,
        "critical": r.critical,
    }


def end(e: End):
    pt = type1(e.point) if isinstance(e.point, Type1FixedPoint) else point(e.point)
    return {"kind": e.kind, "point": pt, "direction": elem(e.direction), "detail": e.detail}


def census(c: ComponentCensus):
    return {
        "count": c.count,
        "noncritical_fixed_directions": [elem(a) for a in c.noncritical_fixed],
        "isolated_by_direction": [{"direction": elem(a), "count": n} for a, n in c.per_direction],
        "isolated_points": [type1(r) for r in c.isolated_points],
        "ends": [end(e) for e in c.ends],
    }


def witness(w: Witness):
    return {"direction": elem(w.direction), "beta": point(w.point), "image": point(w.image),
            "grid_step": rat(w.grid_step), "grid_depth": w.grid_depth}


def pgr(res: PGRResult):
    return {"found": res.found, "conjugacy": mobius(res.conjugacy) if res.conjugacy else None,
            "point": point(res.point), "candidates_tried": res.candidates_tried,
            "needs_ramification": res.needs_ramification}


def locus(rep: LocusReport):
    return {
        "degree": rep.degree,
        "good_reduction": rep.good_reduction,
        "conjugacy": mobius(rep.conjugacy),
        "totally_ramified_point": point(rep.totally_ramified_point),
        "position_map": rational_map(rep.position_map),
        "residual_map": residual_map(_reduce(rep.position_map)),
        "residual_fixed": [residual_fixed(r) for r in rep.residual_fixed],
        "residual_critical": labelled(rep.residual_critical),
        "connected": rep.connected.value,
        "connected_evidence": [elem(a) for a in rep.connected.evidence],
        "finite": rep.finite.value,
        "finite_evidence": [elem(a) for a in rep.finite.evidence],
        "census": census(rep.census),
        "type1_fixed_points": [type1(r) for r in rep.type1],
        "witnesses": [witness(w) for w in rep.witnesses],
    }


def _reduce(phi):
    from .rational_map import reduce

    return reduce(phi)


def oracle(rep: OracleReport):
    return {
        "ok": True,
        "samples": [
            {"direction": s.direction, "center": elem(s.center), "rlog": rat(s.rlog), "fixed": s.fixed,
             "image": point(s.image)}
            for s in rep.samples
        ],
        "checks": list(rep.checks),
        "skipped": list(rep.skipped),
    }


def document(command: str, inputs: dict, result: dict, elapsed_us: int | None = None) -> dict:
    from . import __version__

    doc = {"schema": SCHEMA, "command": command, "input": inputs, "result": result,
           "provenance": {"version": __version__}}
    if elapsed_us is not None:
        doc["provenance"]["elapsed_us"] = elapsed_us
    assert_no_floats(doc)
    return doc


def error_document(command: str, inputs: dict, err) -> dict:
    out = {"code": getattr(err, "code", "ERROR"), "message": str(err)}
    if getattr(err, "offset", None) is not None:
        out["offset"] = err.offset
    sample = getattr(err, "sample", None)
    if sample is not None:
        out["sample"] = point(sample)
    return {"schema": SCHEMA, "command": command, "input": inputs, "error": out}


def assert_no_floats(obj):
    if isinstance(obj, float):
        raise TypeError("floating point value in report")
    if isinstance(obj, dict):
        for v in obj.values():
            assert_no_floats(v)
    elif isinstance(obj, list):
        for v in obj:
            assert_no_floats(v)


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False)


def to_text(doc, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(doc, dict):
        for k, v in doc.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(to_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(doc, list):
        for v in doc:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(to_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(doc))
    return "\n".join(lines)


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (dict, list)):
        return "none"
    return str(v)


def _q(s: str) -> str:
    return '"' + s.replace('"', '\\"') + '"'


def to_dot(rep: LocusReport) -> str:
    """Skeleton of the census: Gauss point, residual fixed directions, isolated and interior points."""
    lines = ["digraph locus {", '  gauss [label="zeta_Gauss", shape=doublecircle];']
    for r in rep.residual_fixed:
        lab = elem(r.label)
        kind = "critical" if r.critical else "non-critical"
        nid = _q(f"dir:{lab}")
        lines.append(f'  {nid} [label="{lab} ({kind})", shape=box];')
        lines.append(f"  gauss -> {nid};")
    for i, rec in enumerate(rep.census.isolated_points):
        nid = _q(f"iso:{i}")
        val = elem(rec.value) if rec.value is not None else poly(rec.factor)
        lines.append(f'  {nid} [label="{val}", shape=point, xlabel="{val}"];')
        lines.append(f'  {_q("dir:" + elem(rec.direction))} -> {nid} [style=dashed];')
    for j, e in enumerate(e for e in rep.census.ends if e.kind == "interior-identity"):
        nid = _q(f"int:{j}")
        pt = e.point
        lines.append(f'  {nid} [label="zeta({elem(pt.center)}, p^{rat(pt.rlog)}) identity tangent"];')
        lines.append(f'  {_q("dir:" + elem(e.direction))} -> {nid};')
    lines.append("}")
    return "\n".join(lines)
