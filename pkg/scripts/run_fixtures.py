"""Analyze every fixture and compare against its frozen expectations."""

from __future__ import annotations

import argparse
import time

from berklocus.berkovich import Type2, classify_direction
from berklocus.errors import BerkError
from berklocus.finite_field import INFTY
from berklocus.fixtures import load_fixtures
from berklocus.locus import analyze
from berklocus.rational_map import is_good_reduction


def check(fx) -> tuple:
    phi = fx.map()
    exp = fx.expected
    got = {"good_reduction": is_good_reduction(phi), "degree": phi.degree}
    if fx.negative:
        if "bad_directions" in exp:
            g = Type2.gauss(phi.ctx)
            labels = list(phi.ctx.residue_field.elements()) + [INFTY]
            got["bad_directions"] = [
                "inf" if a is INFTY else str(a) for a in labels if classify_direction(phi, g, a) == "bad"
            ]
    else:
        rep = analyze(phi)
        got.update(connected=rep.connected.value, finite=rep.finite.value, census=rep.census.count)
    bad = {k: (exp[k], got.get(k)) for k in exp if exp[k] != got.get(k)}
    return got, bad


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--only", default=None, help="substring filter on fixture names")
    args = ap.parse_args()
    failures = 0
    for fx in load_fixtures():
        if args.only and args.only not in fx.name:
            continue
        t0 = time.perf_counter()
        try:
            got, bad = check(fx)
        except BerkError as err:
            got, bad = {"error": err.code}, {"error": str(err)}
        ms = (time.perf_counter() - t0) * 1000
        status = "ok" if not bad else f"MISMATCH {bad}"
        failures += bool(bad)
        print(f"{fx.name:14s} p={fx.prime}  {got}  {ms:7.1f} ms  {status}")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
