"""Finite-precision arithmetic in towers K = Q_p(theta, pi), pi^w = p.

theta generates the unramified extension of degree k, with minimal polynomial
the integer lift of the context's residue modulus; pi is a root of X^w - p.
An integral element is stored as ``w*k`` integers, slot ``i*k + j`` holding the
coefficient of pi^i theta^j, and is only meaningful modulo pi^R for the
element's known precision R.

Precision follows a capped model: rationals embed known modulo pi^N when
integral and with N relative digits otherwise; arithmetic then propagates
absolute precision. Elements whose known digits all vanish are *inexact
zeros*; asking for their valuation raises :class:`PrecisionExhausted`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import isprime

from .errors import ConfigError, InsufficientTower, NegativeValuation, PrecisionExhausted
from .finite_field import GF, FFElem, least_irreducible

INF = math.inf


def vp_int(n: int, p: int) -> int:
    if n == 0:
        return INF
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_rational(q, p: int):
    """Exact p-adic valuation of a rational number (``inf`` for zero)."""
    q = Fraction(q)
    if q == 0:
        return INF
    return vp_int(q.numerator, p) - vp_int(q.denominator, p)


@dataclass(frozen=True)
class FieldContext:
    prime: int
    unram_degree: int
    ram_index: int
    precision: int
    residue_modulus: tuple = field(compare=True)

    def __post_init__(self):
        object.__setattr__(self, "_field", GF(self.prime, self.residue_modulus))

    @property
    def p(self) -> int:
        return self.prime

    @property
    def k(self) -> int:
        return self.unram_degree

    @property
    def w(self) -> int:
        return self.ram_index

    @property
    def residue_field(self) -> GF:
        return self._field

    def __repr__(self):
        return f"FieldContext(p={self.prime}, k={self.k}, w={self.w}, N={self.precision})"

    # -- element constructors --

    @property
    def zero(self) -> PadicElem:
        return PadicElem(self, None, None, None)

    @property
    def one(self) -> PadicElem:
        return self.from_rational(1)

    @property
    def pi(self) -> PadicElem:
        return PadicElem(self, 1, _unit_vector(self), self.precision)

    def pi_power(self, m: int) -> PadicElem:
        """pi^m, for any integer m."""
        return PadicElem(self, m, _unit_vector(self), self.precision)

    def inexact_zero(self, absprec: int) -> PadicElem:
        return PadicElem(self, None, None, absprec)

    def from_rational(self, q) -> PadicElem:
        q = Fraction(q)
        if q == 0:
            return self.zero
        p, w, N = self.prime, self.ram_index, self.precision
        v = vp_rational(q, p)
        e = v * w
        if e >= N:
            return self.inexact_zero(N)
        relprec = N - e if e >= 0 else N
        u = q / Fraction(p) ** v
        M = -(-relprec // w) + 1
        mod = p ** M
        digit = u.numerator * pow(u.denominator, -1, mod) % mod
        vec = [0] * (w * self.k)
        vec[0] = digit
        return PadicElem(self, e, _trunc(self, vec, relprec), relprec)

    def lift(self, c: FFElem) -> PadicElem:
        """Canonical digit lift of a residue field element."""
        if c.field != self.residue_field:
            raise InsufficientTower(f"{c!r} lies outside the residue field {self.residue_field}")
        if c.is_zero():
            return self.zero
        vec = [0] * (self.ram_index * self.k)
        vec[: self.k] = c.coeffs
        return PadicElem(self, 0, tuple(vec), self.precision)

    def from_vector(self, vec, val: int = 0) -> PadicElem:
        """pi^val times the integral element with the given slot vector."""
        vec = list(vec) + [0] * (self.ram_index * self.k - len(vec))
        t = _val_int(self, vec, self.precision)
        if t is None:
            return self.inexact_zero(val + self.precision)
        unit = _shift(self, vec, -t)
        relprec = self.precision - t
        return PadicElem(self, val + t, _trunc(self, unit, relprec), relprec)

    def coerce(self, x) -> PadicElem:
        if isinstance(x, PadicElem):
            if x.ctx != self:
                raise TypeError("elements of different contexts do not interoperate")
            return x
        if isinstance(x, (int, Fraction)):
            return self.from_rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self}")

    def with_ram_index(self, ram_index: int) -> FieldContext:
        return make_context(self.prime, self.k, ram_index, self.precision * (ram_index // self.ram_index))


def make_context(prime: int, unram_degree: int = 1, ram_index: int = 1, precision: int = 64) -> FieldContext:
    if not isinstance(prime, int) or prime < 2 or not isprime(prime):
        raise ConfigError(f"prime must be a prime number, got {prime!r}")
    for name, value in (("unram_degree", unram_degree), ("ram_index", ram_index), ("precision", precision)):
        if not isinstance(value, int) or value < 1:
            raise ConfigError(f"{name} must be a positive integer, got {value!r}")
    modulus = least_irreducible(prime, unram_degree)
    return FieldContext(prime, unram_degree, ram_index, precision, modulus)


# --- integral vector arithmetic ---

def _unit_vector(ctx):
    vec = [0] * (ctx.ram_index * ctx.k)
    vec[0] = 1
    return tuple(vec)


def _trunc(ctx, vec, R):
    """Canonical representative modulo pi^R."""
    p, w, k = ctx.prime, ctx.ram_index, ctx.k
    if R <= 0:
        return (0,) * (w * k)
    q, r = divmod(R, w)
    out = []
    for i in range(w):
        mod = p ** (q + (1 if i < r else 0))
        out.extend(c % mod for c in vec[i * k:(i + 1) * k])
    return tuple(out)


def _val_int(ctx, vec, R):
    """pi-adic valuation of an integral vector known modulo pi^R; None if it is zero there."""
    p, w, k = ctx.prime, ctx.ram_index, ctx.k
    vec = _trunc(ctx, vec, R)
    best = None
    for i in range(w):
        for c in vec[i * k:(i + 1) * k]:
            if c:
                v = w * vp_int(c, p) + i
                if best is None or v < best:
                    best = v
    if best is not None and best >= R:
        return None
    return best


def _shift(ctx, vec, m):
    """Multiply by pi^m; for m < 0 the vector must be divisible by pi^-m."""
    p, w, k = ctx.prime, ctx.ram_index, ctx.k
    out = [0] * (w * k)
    for i in range(w):
        q, r = divmod(i + m, w)
        for j in range(k):
            c = vec[i * k + j]
            if not c:
                continue
            if q >= 0:
                out[r * k + j] += c * p ** q
            else:
                d = p ** (-q)
                if c % d:
                    raise ArithmeticError("pi-shift of a non-divisible vector")
                out[r * k + j] += c // d
    return out


def _theta_reduction(ctx):
    cache = getattr(ctx, "_theta_red", None)
    if cache is None:
        k = ctx.k
        m = list(ctx.residue_modulus)  # monic integer lift
        red = []
        # theta^(k+i) as a combination of 1..theta^(k-1), over Z
        cur = [-c for c in m[:k]]
        for _ in range(max(k - 1, 0)):
            red.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            cur = [c - top * mc for c, mc in zip(cur, m[:k])]
        cache = red
        object.__setattr__(ctx, "_theta_red", cache)
    return cache


def _ring_mul(ctx, a, b, R):
    w, k, p = ctx.ram_index, ctx.k, ctx.prime
    tmp = [[0] * (2 * k - 1) for _ in range(2 * w - 1)]
    for i in range(w):
        for j in range(k):
            x = a[i * k + j]
            if not x:
                continue
            for i2 in range(w):
                row = tmp[i + i2]
                for j2 in range(k):
                    y = b[i2 * k + j2]
                    if y:
                        row[j + j2] += x * y
    red = _theta_reduction(ctx)
    out = [0] * (w * k)
    for s, row in enumerate(tmp):
        for extra, c in enumerate(row[k:]):
            if c:
                for j, r in enumerate(red[extra]):
                    row[j] += c * r
        scale = p if s >= w else 1
        base = (s % w) * k
        for j in range(k):
            out[base + j] += row[j] * scale
    return _trunc(ctx, out, R)


class PadicElem:
    """pi^val * unit with ``relprec`` known pi-adic digits, or a (possibly inexact) zero.

    A zero has ``val is None``; ``absprec is None`` marks an exact zero,
    otherwise the element is only known to vanish modulo pi^absprec.
    """

    __slots__ = ("ctx", "val", "unit", "relprec", "_absprec")

    def __init__(self, ctx: FieldContext, val, unit, relprec):
        self.ctx = ctx
        if val is None:
            self.val = None
            self.unit = None
            self.relprec = None
            self._absprec = relprec
        else:
            if relprec < 1:
                raise PrecisionExhausted("element with no known digits")
            self.val = val
            self.unit = unit
            self.relprec = relprec
            self._absprec = val + relprec

    @property
    def absprec(self):
        return INF if self.is_exact_zero() else self._absprec

    def is_exact_zero(self) -> bool:
        return self.val is None and self._absprec is None

    def is_inexact_zero(self) -> bool:
        return self.val is None and self._absprec is not None

    def is_zero(self) -> bool:
        """Zero at known precision (exact or indistinguishable)."""
        return self.val is None

    def valuation(self):
        if self.is_exact_zero():
            return INF
        if self.val is None:
            raise PrecisionExhausted(f"element is O(pi^{self._absprec}); valuation unknown")
        return Fraction(self.val, self.ctx.ram_index)

    def valuation_lower_bound(self):
        """Exact valuation, or the guaranteed lower bound for an inexact zero."""
        if self.val is None and self._absprec is not None:
            return Fraction(self._absprec, self.ctx.ram_index)
        return self.valuation()

    # -- arithmetic --

    def _other(self, other):
        if isinstance(other, PadicElem):
            if other.ctx != self.ctx:
                raise TypeError("elements of different contexts do not interoperate")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.from_rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        if self.is_exact_zero():
            return other
        if other.is_exact_zero():
            return self
        ctx = self.ctx
        ap = min(self.absprec, other.absprec)
        parts = [x for x in (self, other) if x.val is not None]
        if not parts:
            return ctx.inexact_zero(ap)
        e = min(x.val for x in parts)
        if e >= ap:
            return ctx.inexact_zero(ap)
        total = [0] * (ctx.ram_index * ctx.k)
        for x in parts:
            for i, c in enumerate(_shift(ctx, x.unit, x.val - e)):
                total[i] += c
        R = ap - e
        t = _val_int(ctx, total, R)
        if t is None:
            return ctx.inexact_zero(ap)
        total = _trunc(ctx, total, R)
        unit = _shift(ctx, total, -t)
        return PadicElem(ctx, e + t, _trunc(ctx, unit, R - t), R - t)

    __radd__ = __add__

    def __neg__(self):
        if self.val is None:
            return self
        return PadicElem(self.ctx, self.val, _trunc(self.ctx, [-c for c in self.unit], self.relprec), self.relprec)

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        ctx = self.ctx
        if self.is_exact_zero() or other.is_exact_zero():
            return ctx.zero
        if self.val is None or other.val is None:
            if self.val is None and other.val is None:
                return ctx.inexact_zero(self._absprec + other._absprec)
            z, x = (self, other) if self.val is None else (other, self)
            return ctx.inexact_zero(z._absprec + x.val)
        R = min(self.relprec, other.relprec)
        return PadicElem(ctx, self.val + other.val, _ring_mul(ctx, self.unit, other.unit, R), R)

    __rmul__ = __mul__

    def inverse(self) -> PadicElem:
        if self.is_exact_zero():
            raise ZeroDivisionError("inverse of exact zero")
        if self.val is None:
            raise PrecisionExhausted("inverse of an element indistinguishable from zero")
        ctx, R = self.ctx, self.relprec
        r0 = ctx.residue_field(self.unit[: ctx.k]).inverse()
        y = list(r0.coeffs) + [0] * (ctx.ram_index * ctx.k - ctx.k)
        two = [0] * len(y)
        two[0] = 2
        prec = 1
        while prec < R:
            prec = min(2 * prec, R)
            uy = _ring_mul(ctx, self.unit, y, prec)
            y = _ring_mul(ctx, y, [a - b for a, b in zip(two, uy)], prec)
        return PadicElem(ctx, -self.val, _trunc(ctx, y, R), R)

    def __truediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._other(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.ctx.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def residue(self) -> FFElem:
        F = self.ctx.residue_field
        if self.is_exact_zero():
            return F.zero
        if self.val is None:
            if self._absprec >= 1:
                return F.zero
            raise PrecisionExhausted("residue of an element with unknown integral part")
        if self.val < 0:
            raise NegativeValuation(f"residue of element with valuation {self.valuation()}")
        if self.val > 0:
            return F.zero
        return F(self.unit[: self.ctx.k])

    def digits(self):
        """pi-adic digits of the unit part (residue field elements), least significant first."""
        if self.val is None:
            return []
        ctx, out = self.ctx, []
        vec = list(self.unit)
        F = ctx.residue_field
        for n in range(self.relprec):
            d = F(vec[: ctx.k])
            out.append(d)
            lifted = list(d.coeffs) + [0] * (len(vec) - ctx.k)
            vec = _shift(ctx, [a - b for a, b in zip(vec, lifted)], -1)
        return out

    def __repr__(self):
        if self.is_exact_zero():
            return "0"
        if self.val is None:
            return f"O(pi^{self._absprec})"
        return f"pi^{self.val}*<{self.unit[: self.ctx.k]}...>+O({self.relprec})"


def valuation(x):
    """Valuation of a tower element or of an exact rational (given its context via PadicElem)."""
    return x.valuation()


def residue(x: PadicElem) -> FFElem:
    return x.residue()


def lift(ctx: FieldContext, c: FFElem) -> PadicElem:
    return ctx.lift(c)


def embed(x: PadicElem, target: FieldContext) -> PadicElem:
    """Embed into a context with the same p, k and a multiple ram_index."""
    src = x.ctx
    if target == src:
        return x
    if target.prime != src.prime or target.k != src.k or target.ram_index % src.ram_index:
        raise InsufficientTower(f"{target} does not refine {src}")
    b = target.ram_index // src.ram_index
    if x.is_exact_zero():
        return target.zero
    if x.val is None:
        return target.inexact_zero(x._absprec * b)
    k = src.k
    vec = [0] * (target.ram_index * k)
    for i in range(src.ram_index):
        vec[i * b * k:(i * b + 1) * k] = x.unit[i * k:(i + 1) * k]
    relprec = min(x.relprec * b, target.precision)
    return PadicElem(target, x.val * b, _trunc(target, vec, relprec), relprec)
