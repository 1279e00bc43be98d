"""Univariate polynomials over Q, over a p-adic tower, or over a finite field.

``Poly`` is a thin immutable wrapper over a coefficient tuple (low degree
first) and the ring the coefficients live in. Finite-field routines implement
square-free decomposition, distinct/equal-degree factorization and root finding
in a splitting field; over Q we provide exact gcds and resultants. There is
deliberately no gcd over the tower: at finite precision it is ill-posed.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from functools import lru_cache, reduce

from .errors import ZeroPolynomial
from .finite_field import GF, FFElem, least_irreducible
from .padic import FieldContext, PadicElem


class _Rationals:
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x):
        return Fraction(x)

    def __repr__(self):
        return "QQ"


QQ = _Rationals()


def _coerce(ring, x):
    if isinstance(ring, FieldContext):
        return ring.coerce(x)
    return ring(x)


def _is_zero(c) -> bool:
    if isinstance(c, PadicElem):
        return c.is_exact_zero()
    if isinstance(c, FFElem):
        return c.is_zero()
    return c == 0


class Poly:
    __slots__ = ("ring", "coeffs")

    def __init__(self, coeffs, ring=QQ):
        cs = [_coerce(ring, c) for c in coeffs]
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.ring = ring
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls, ring=QQ):
        return cls([0, 1], ring)

    @classmethod
    def const(cls, c, ring=QQ):
        return cls([c], ring)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self):
        if not self.coeffs:
            raise ZeroPolynomial("leading coefficient of zero polynomial")
        return self.coeffs[-1]

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ring.zero

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def _lift(self, other):
        if isinstance(other, Poly):
            return other
        return Poly([other], self.ring)

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[i] + other[i] for i in range(n)], self.ring)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.ring)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = _coerce(self.ring, other)
            return Poly([c * other for c in self.coeffs], self.ring)
        if not self.coeffs or not other.coeffs:
            return Poly([], self.ring)
        out = [self.ring.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                if not _is_zero(b):
                    out[i + j] = out[i + j] + a * b
        return Poly(out, self.ring)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = Poly([1], self.ring)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly([], self.ring), self
        inv = 1 / other.lc() if not isinstance(other.lc(), FFElem) else other.lc().inverse()
        quo = [self.ring.zero] * (dq + 1)
        for i in range(dq, -1, -1):
            c = rem[i + other.degree] * inv
            quo[i] = c
            if _is_zero(c):
                continue
            for j, b in enumerate(other.coeffs):
                rem[i + j] = rem[i + j] - c * b
        return Poly(quo, self.ring), Poly(rem[: other.degree], self.ring)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        acc = self.ring.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> Poly:
        return Poly([c * i for i, c in enumerate(self.coeffs)][1:], self.ring)

    def monic(self) -> Poly:
        lc = self.lc()
        inv = lc.inverse() if isinstance(lc, FFElem) else 1 / lc
        return self * inv

    def compose(self, other: Poly) -> Poly:
        acc = Poly([], self.ring)
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def scale(self, a) -> Poly:
        """f(a*t)."""
        out, power = [], _coerce(self.ring, 1)
        for c in self.coeffs:
            out.append(c * power)
            power = power * a
        return Poly(out, self.ring)

    def reverse(self, n: int | None = None) -> Poly:
        """t^n f(1/t), with n defaulting to the degree."""
        n = self.degree if n is None else n
        cs = list(self.coeffs) + [self.ring.zero] * (n + 1 - len(self.coeffs))
        return Poly(list(reversed(cs[: n + 1])), self.ring)

    def map(self, fn, ring) -> Poly:
        return Poly([fn(c) for c in self.coeffs], ring)

    def order_at_zero(self) -> int:
        for i, c in enumerate(self.coeffs):
            if not _is_zero(c):
                return i
        return math.inf

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if _is_zero(c):
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            terms.append(f"{c}" if not mono else (mono if c == 1 else f"({c})*{mono}"))
        return " + ".join(reversed(terms))


def taylor_shift(f: Poly, a) -> Poly:
    """Coefficients of f(a + t) in t (Horner-style synthetic division)."""
    a = _coerce(f.ring, a)
    cs = list(f.coeffs)
    n = len(cs)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            cs[j] = cs[j] + a * cs[j + 1]
    return Poly(cs, f.ring)


# --- gcd, square-free parts ---

def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd over a field (Q or a finite field)."""
    if isinstance(f.ring, FieldContext):
        raise TypeError("gcd over the p-adic tower is not supported")
    if f.is_zero() and g.is_zero():
        raise ZeroPolynomial("gcd(0, 0)")
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def ff_gcd(f: Poly, g: Poly) -> Poly:
    if not isinstance(f.ring, GF):
        raise TypeError("ff_gcd expects residue-field polynomials")
    return poly_gcd(f, g)


def _pth_root_poly(f: Poly) -> Poly:
    p = f.ring.p
    return Poly([c.pth_root() for c in f.coeffs[::p]], f.ring)


def ff_squarefree_decomposition(f: Poly) -> list:
    """[(g_i, m_i)] with f = lc * prod g_i^m_i, g_i monic square-free and coprime."""
    if f.is_zero():
        raise ZeroPolynomial("square-free decomposition of zero")
    F = f.ring
    f = f.monic()
    out = []

    def rec(f, mult):
        if f.degree < 1:
            return
        d = f.derivative()
        if d.is_zero():
            rec(_pth_root_poly(f), mult * F.p)
            return
        c = poly_gcd(f, d)
        w = f // c
        i = 1
        while w.degree > 0:
            y = poly_gcd(w, c)
            fac = w // y
            if fac.degree > 0:
                out.append((fac.monic(), i * mult))
            w, c = y, c // y
            i += 1
        if c.degree > 0:
            rec(_pth_root_poly(c.monic()), mult * F.p)

    rec(f, 1)
    return out


def squarefree_part(f: Poly) -> Poly:
    if f.is_zero():
        raise ZeroPolynomial("square-free part of zero")
    if isinstance(f.ring, GF):
        parts = ff_squarefree_decomposition(f)
        return reduce(lambda a, b: a * b, (g for g, _ in parts), Poly([1], f.ring))
    if f.degree < 1:
        return f.monic()
    return (f // poly_gcd(f, f.derivative())).monic()


# --- finite field factorization ---

def _seed(f: Poly) -> int:
    h = 0
    for c in f.coeffs:
        for x in c.coeffs:
            h = (h * 1000003 + x + 1) % (1 << 61)
    return h


def _powmod(base: Poly, e: int, mod: Poly) -> Poly:
    result = Poly([1], mod.ring)
    base = base % mod
    while e:
        if e & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        e >>= 1
    return result


def ff_distinct_degree(f: Poly) -> list:
    """Distinct-degree factorization of a monic square-free polynomial."""
    F = f.ring
    q = F.order
    x = Poly.x(F)
    out, h, d = [], x % f if f.degree > 0 else x, 0
    while f.degree >= 2 * (d + 1):
        d += 1
        h = _powmod(h, q, f)
        g = poly_gcd(f, h - x)
        if g.degree > 0:
            out.append((g, d))
            f = f // g
            h = h % f
    if f.degree > 0:
        out.append((f.monic(), f.degree))
    return out


def ff_equal_degree(f: Poly, d: int) -> list:
    """Split a monic square-free product of degree-d irreducibles (Cantor-Zassenhaus)."""
    if f.degree == d:
        return [f]
    F = f.ring
    rng = random.Random(_seed(f) ^ d)
    q = F.order
    while True:
        a = Poly([F([rng.randrange(F.p) for _ in range(F.degree)]) for _ in range(f.degree)], F)
        if a.degree < 1:
            continue
        if F.p == 2:
            m = F.degree * d
            t, acc = a % f, a % f
            for _ in range(m - 1):
                t = (t * t) % f
                acc = acc + t
            g = poly_gcd(f, acc) if not acc.is_zero() else f
        else:
            g = poly_gcd(f, _powmod(a, (q ** d - 1) // 2, f) - 1)
        if 0 < g.degree < f.degree:
            return ff_equal_degree(g, d) + ff_equal_degree(f // g, d)


def ff_factor(f: Poly) -> list:
    """Monic irreducible factors with multiplicity, sorted by (degree, coefficients)."""
    out = []
    for g, m in ff_squarefree_decomposition(f):
        for h, d in ff_distinct_degree(g):
            for irr in ff_equal_degree(h, d):
                out.append((irr.monic(), m))
    out.sort(key=lambda fm: (fm[0].degree, [c.sort_key() for c in reversed(fm[0].coeffs)], fm[1]))
    return out


@lru_cache(maxsize=None)
def extension_field(base: GF, m: int) -> GF:
    """F_{q^m} as a field over F_p, with a fixed embedding of ``base``."""
    if m == 1:
        return base
    big = GF(base.p, least_irreducible(base.p, base.degree * m))
    if base.degree == 1:
        root = big(base.gen.coeffs[0])
    else:
        mod = Poly([big(c) for c in base.modulus], big)
        roots = sorted((r for r, _ in _linear_roots(mod)), key=lambda r: r.sort_key())
        root = roots[0]
    return GF(base.p, big.modulus, base=base, base_root=root)


def _linear_roots(f: Poly) -> list:
    out = []
    for g, m in ff_squarefree_decomposition(f):
        for h, d in ff_distinct_degree(g):
            if d == 1:
                out.extend((-lin.coeffs[0], m) for lin in ff_equal_degree(h, 1))
    return out


def ff_roots_in_closure(f: Poly):
    """All roots of f over the algebraic closure of its coefficient field.

    Returns ``(field, [(root, multiplicity), ...])`` where ``field`` is the
    smallest extension F_{q^L} splitting f, shared by every root.
    """
    if f.is_zero():
        raise ZeroPolynomial("roots of the zero polynomial")
    F = f.ring
    factors = ff_factor(f)
    L = reduce(math.lcm, (g.degree for g, _ in factors), 1)
    big = extension_field(F, L)
    roots = []
    for g, m in factors:
        gb = Poly([big(c) for c in g.coeffs], big)
        roots.extend((r, m) for r, _ in _linear_roots(gb))
    roots.sort(key=lambda rm: rm[0].sort_key())
    return big, roots


def embed_poly(f: Poly, field: GF) -> Poly:
    if f.ring == field:
        return f
    return Poly([field(c) for c in f.coeffs], field)


# --- resultants ---

def resultant(f: Poly, g: Poly):
    """Res(f, g) = lc(f)^deg g * prod g(roots of f), by the Euclidean remainder sequence."""
    if f.is_zero() or g.is_zero():
        raise ZeroPolynomial("resultant with the zero polynomial")
    one = _coerce(f.ring, 1)
    if f.degree == 0:
        return f.lc() ** g.degree if g.degree else one
    if g.degree == 0:
        return g.lc() ** f.degree
    acc = one
    while True:
        m, n = f.degree, g.degree
        if n == 0:
            return acc * g.lc() ** m
        r = f % g
        if r.is_zero():
            return _coerce(f.ring, 0)
        if (m * n) % 2:
            acc = -acc
        acc = acc * g.lc() ** (m - r.degree)
        f, g = g, r


def sylvester_resultant(f_coeffs, m: int, g_coeffs, n: int, ring=QQ):
    """Determinant of the Sylvester matrix for formal degrees m, n (Gaussian elimination)."""
    size = m + n
    if size == 0:
        return _coerce(ring, 1)
    f = [_coerce(ring, c) for c in f_coeffs] + [ring.zero] * (m + 1 - len(f_coeffs))
    g = [_coerce(ring, c) for c in g_coeffs] + [ring.zero] * (n + 1 - len(g_coeffs))
    rows = []
    for i in range(n):
        row = [ring.zero] * size
        for j in range(m + 1):
            row[i + j] = f[m - j]
        rows.append(row)
    for i in range(m):
        row = [ring.zero] * size
        for j in range(n + 1):
            row[i + j] = g[n - j]
        rows.append(row)
    return _det(rows, ring)


def _det(rows, ring):
    a = [list(r) for r in rows]
    n = len(a)
    det = _coerce(ring, 1)
    for col in range(n):
        piv = next((r for r in range(col, n) if not _is_zero(a[r][col])), None)
        if piv is None:
            return _coerce(ring, 0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if not _is_zero(a[r][col]):
                factor = a[r][col] * inv
                for c in range(col, n):
                    a[r][c] = a[r][c] - factor * a[col][c]
    return det


# --- rational polynomials ---

def qq_factor(f: Poly) -> list:
    """Irreducible factors over Q with multiplicity (monic)."""
    import sympy

    z = sympy.Symbol("z")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * z ** i for i, c in enumerate(f.coeffs))
    _, facs = sympy.factor_list(sympy.Poly(expr, z, domain="QQ"))
    out = []
    for g, m in facs:
        cs = [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in reversed(g.all_coeffs())]
        out.append((Poly(cs, QQ).monic(), m))
    out.sort(key=lambda gm: (gm[0].degree, gm[0].coeffs))
    return out


def interpolate(xs, ys, ring=QQ) -> Poly:
    """Lagrange interpolation through (xs[i], ys[i]); xs are distinct integers."""
    result = Poly([], ring)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        term = Poly([yi], ring)
        for j, xj in enumerate(xs):
            if j != i:
                term = term * Poly([-xj, 1], ring) * _coerce(ring, Fraction(1, xi - xj))
        result = result + term
    return result
