"""Command line interface: berklocus <command> EXPR -p PRIME [options]."""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

from . import report as R
from .berkovich import Type2, classify_direction
from .errors import BerkError, ConfigError
from .finite_field import INFTY
from .locus import analyze, component_census, good_position
from .oracle import GridSpec, oracle_verify
from .parse import MapSpec, parse_mobius
from .rational_map import classify_type1_fixed_points, conjugate, is_good_reduction, normalize, reduce

COMMANDS = ("analyze", "reduce", "fixed-points", "census", "verify", "sketch")


def _fraction(text: str) -> Fraction:
    try:
        f = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if f <= 0:
        raise argparse.ArgumentTypeError("grid step must be positive")
    return f


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("expression", help='rational map in z, e.g. "(z^2+z+p^2)/(z^2+1)"')
    common.add_argument("-p", "--prime", type=int, required=True)
    common.add_argument("--unram", type=int, default=1, help="unramified degree of the tower")
    common.add_argument("--ram", type=int, default=1, help="ramification index of the tower")
    common.add_argument("--precision", type=int, default=64, help="absolute precision in units of pi")
    common.add_argument("--grid-step", type=_fraction, default=None, help="oracle rlog step (default 1/(2*ram))")
    common.add_argument("--grid-depth", type=int, default=6)
    common.add_argument("--format", choices=("json", "text", "dot"), default="json")
    common.add_argument("--conjugate", default=None, metavar="SIGMA",
                        help="analyze sigma o phi o sigma^-1 for a degree-1 expression sigma")
    parser = argparse.ArgumentParser(prog="berklocus", description="Berkovich fixed point locus analysis")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _inputs(args) -> dict:
    return {
        "expression": args.expression,
        "prime": args.prime,
        "unram": args.unram,
        "ram": args.ram,
        "precision": args.precision,
        "conjugate": args.conjugate,
    }


def load_map(args):
    spec = MapSpec.parse(args.expression, args.prime, unram=args.unram, ram=args.ram, precision=args.precision)
    phi = spec.to_map()
    if args.conjugate:
        phi = conjugate(phi, parse_mobius(args.conjugate, args.prime))
    return spec, phi


def _directions(phi):
    F = phi.ctx.residue_field
    gauss = Type2.gauss(phi.ctx)
    out = []
    for a in list(F.elements()) + [INFTY]:
        out.append({"direction": R.elem(a), "class": classify_direction(phi, gauss, a)})
    return out


def run(args):
    """Result payload for the chosen command (and the DOT text for sketches)."""
    spec, phi = load_map(args)
    phi = normalize(phi)
    if phi.degree < 2 and args.command != "reduce":
        raise ConfigError("the map must have degree at least 2")
    cmd = args.command
    if cmd == "reduce":
        r = reduce(phi)
        good = phi.degree >= 1 and r.degree == phi.degree
        return {"map": R.rational_map(phi), "residual_map": R.residual_map(r), "good_reduction": good,
                "gauss_directions": _directions(phi)}, None
    if cmd == "fixed-points":
        return {"map": R.rational_map(phi), "good_reduction": is_good_reduction(phi),
                "fixed_points": [R.type1(x) for x in classify_type1_fixed_points(phi)]}, None
    if cmd == "census":
        psi, M, xi = good_position(phi)
        return {"conjugacy": R.mobius(M), "totally_ramified_point": R.point(xi),
                "census": R.census(component_census(psi))}, None
    if cmd == "verify":
        psi, M, xi = good_position(phi)
        grid = GridSpec(step=args.grid_step, depth=args.grid_depth)
        return {"conjugacy": R.mobius(M), "oracle": R.oracle(oracle_verify(psi, grid))}, None
    rep = analyze(phi)
    return R.locus(rep), (R.to_dot(rep) if cmd == "sketch" else None)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    inputs = _inputs(args)
    t0 = time.perf_counter_ns()
    try:
        result, dot = run(args)
    except BerkError as err:
        doc = R.error_document(args.command, inputs, err)
        print(R.to_json(doc) if args.format == "json" else R.to_text(doc))
        return err.exit_code
    doc = R.document(args.command, inputs, result, (time.perf_counter_ns() - t0) // 1000)
    if args.format == "dot" or (args.command == "sketch" and args.format != "json" and dot):
        print(dot if dot is not None else R.to_text(doc))
    elif args.format == "text":
        print(R.to_text(doc))
    else:
        print(R.to_json(doc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
