"""Conjugate random good-reduction maps by random Mobius maps and compare the analyses."""

import argparse
import collections
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from helpers import random_good_map, random_mobius  # noqa: E402

from berklocus.locus import analyze  # noqa: E402
from berklocus.rational_map import conjugate  # noqa: E402


def summary(rep):
    return bool(rep.connected), bool(rep.finite), rep.census.count


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-degree", type=int, default=3)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    outcome = collections.Counter()
    t0 = time.perf_counter()
    for _ in range(args.count):
        phi = random_good_map(rng, args.max_degree)
        sigma = random_mobius(rng, phi.ctx.prime)
        try:
            same = summary(analyze(phi, witnesses=False)) == summary(analyze(conjugate(phi, sigma), witnesses=False))
            outcome["agree" if same else "DIFFER"] += 1
            if not same:
                print("differ:", phi, sigma)
        except Exception as exc:  # noqa: BLE001
            outcome[type(exc).__name__] += 1
            print(type(exc).__name__, exc, "|", phi, "|", sigma)
    print(dict(outcome), f"{time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
