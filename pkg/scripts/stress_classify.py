"""Run type-1 classification and the census over many random good-reduction maps."""

import argparse
import collections
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from helpers import random_good_map  # noqa: E402

from berklocus.locus import component_census  # noqa: E402
from berklocus.rational_map import classify_type1_fixed_points  # noqa: E402


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=300)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-degree", type=int, default=4)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    errors = collections.Counter()
    classes = collections.Counter()
    worst = 0
    for _ in range(args.count):
        phi = random_good_map(rng, args.max_degree)
        try:
            for t in classify_type1_fixed_points(phi):
                classes[t.cls] += 1
            c = component_census(phi)
            worst = max(worst, c.count - phi.degree)
            assert c.count <= phi.degree + 2
        except Exception as exc:  # noqa: BLE001
            errors[f"{type(exc).__name__}: {exc}"] += 1
            print(phi.ctx.prime, phi.polys(), exc)
    print("classes:", dict(classes))
    print("max census - degree:", worst)
    print("errors:", dict(errors) or "none")


if __name__ == "__main__":
    main()
