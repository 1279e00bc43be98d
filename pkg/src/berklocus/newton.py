"""Newton polygons from coefficient valuations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ZeroPolynomial


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull as (slope, length) pairs with increasing slopes.

    A segment of slope -s and length l accounts for l roots of valuation s.
    ``zero_roots`` is the multiplicity of the root 0 (the x-factor), which is
    not part of the hull.
    """

    segments: tuple
    zero_roots: int = 0

    def root_valuations(self) -> list:
        """Root valuations with multiplicity, smallest first; 0-roots as ``inf``."""
        out = []
        for slope, length in reversed(self.segments):
            out.extend([-slope] * length)
        return out + [math.inf] * self.zero_roots

    def count_roots(self, predicate) -> int:
        return sum(1 for s in self.root_valuations() if predicate(s))

    @property
    def length(self) -> int:
        return sum(length for _, length in self.segments)


def newton_polygon(coeff_valuations) -> NewtonPolygon:
    """Newton polygon of sum c_i z^i given v(c_i), low degree first (``inf`` for zero)."""
    vals = list(coeff_valuations)
    while vals and vals[-1] == math.inf:
        vals.pop()
    if not vals:
        raise ZeroPolynomial("Newton polygon of the zero polynomial")
    zero_roots = 0
    while vals[zero_roots] == math.inf:
        zero_roots += 1
    pts = [(i, Fraction(v)) for i, v in enumerate(vals) if v != math.inf and i >= zero_roots]
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    segments = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        segments.append((Fraction(y2 - y1, x2 - x1), x2 - x1))
    return NewtonPolygon(tuple(segments), zero_roots)
