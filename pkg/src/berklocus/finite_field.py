"""Finite fields F_{p^n} in polynomial basis, and extensions of a fixed base field.

Elements are coefficient tuples over F_p, low degree first, reduced modulo a
monic irreducible modulus. Fields compare by (p, modulus); an extension field
additionally remembers the image of its base field's generator, which is how
base elements are embedded.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from sympy import isprime, primefactors


# --- dense polynomial helpers over F_p (lists of ints, low degree first) ---

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a, m, p):
    a = [x % p for x in a]
    _trim(a)
    dm = len(m) - 1
    inv = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _fp_mulmod(a, b, m, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _fp_mod(out, m, p)


def _fp_powmod_x(e, m, p):
    """x^e mod m over F_p."""
    result, base = [1], _fp_mod([0, 1], m, p)
    while e:
        if e & 1:
            result = _fp_mulmod(result, base, m, p)
        base = _fp_mulmod(base, base, m, p)
        e >>= 1
    return result


def _fp_gcd(a, b, p):
    a, b = _trim([x % p for x in a]), _trim([x % p for x in b])
    while b:
        a, b = b, _fp_mod(a, b, p)
    return a


def is_irreducible_fp(m, p) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    n = len(m) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    if _fp_mod(_fp_powmod_x(p ** n, m, p) + [], m, p) != _fp_mod(x, m, p):
        return False
    for q in primefactors(n):
        h = _fp_powmod_x(p ** (n // q), m, p)
        h = h + [0] * max(0, 2 - len(h))
        h[1] = (h[1] - 1) % p
        if len(_fp_gcd(m, h, p)) > 1:
            return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(p: int, n: int) -> tuple:
    """Lexicographically least monic irreducible of degree n (c_0 compared first)."""
    for tail in itertools.product(range(p), repeat=n):
        m = list(tail) + [1]
        if is_irreducible_fp(m, p):
            return tuple(m)
    raise ArithmeticError(f"no irreducible polynomial of degree {n} over F_{p}")


class GF:
    """The field F_p[x]/(modulus)."""

    def __init__(self, p: int, modulus: tuple, base: GF | None = None, base_root=None):
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.modulus = tuple(int(c) % p for c in modulus)
        self.degree = len(self.modulus) - 1
        self.order = p ** self.degree
        self.base = base
        self.base_root = base_root  # image of base.gen, an element of self
        n = self.degree
        # x^(n+i) mod modulus, for i < n - 1
        self._red = []
        for i in range(max(n - 1, 0)):
            self._red.append(tuple(_fp_mod([0] * (n + i) + [1], list(self.modulus), p) + [0] * n)[:n])
        self.zero = FFElem(self, (0,) * n)
        self.one = FFElem(self, (1,) + (0,) * (n - 1))

    @classmethod
    def prime_power(cls, p: int, n: int = 1) -> GF:
        return cls(p, least_irreducible(p, n))

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.degree})"

    @property
    def gen(self) -> FFElem:
        if self.degree == 1:
            # x mod (x + c) is -c
            return self(-self.modulus[0])
        return FFElem(self, (0, 1) + (0,) * (self.degree - 2))

    def __call__(self, value) -> FFElem:
        if isinstance(value, FFElem):
            if value.field == self:
                return value
            return self.embed(value)
        if isinstance(value, int):
            return FFElem(self, (value % self.p,) + (0,) * (self.degree - 1))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.degree:
            coeffs = _fp_mod(coeffs, list(self.modulus), self.p)
        return FFElem(self, tuple(coeffs) + (0,) * (self.degree - len(coeffs)))

    def embed(self, x: FFElem) -> FFElem:
        """Image of an element of ``self.base`` (or of self) in this field."""
        if x.field == self:
            return x
        if self.base is None or x.field != self.base:
            raise ValueError(f"cannot embed {x.field} into {self}")
        out, power = self.zero, self.one
        for c in x.coeffs:
            if c:
                out = out + power * c
            power = power * self.base_root
        return out

    def elements(self):
        for coeffs in itertools.product(range(self.p), repeat=self.degree):
            yield FFElem(self, coeffs)

    def _reduce(self, prod):
        n = self.degree
        out = list(prod[:n]) + [0] * max(0, n - len(prod))
        for i, c in enumerate(prod[n:]):
            if c:
                for j, r in enumerate(self._red[i]):
                    out[j] += c * r
        p = self.p
        return tuple(x % p for x in out)


class FFElem:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: GF, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other):
        if isinstance(other, FFElem):
            if other.field != self.field:
                raise TypeError(f"mixing {self.field} and {other.field}")
            return other
        if isinstance(other, int):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FFElem(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FFElem(self.field, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            p = self.field.p
            return FFElem(self.field, tuple(a * other % p for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) == 1:
            return FFElem(self.field, ((a[0] * b[0]) % self.field.p,))
        prod = [0] * (2 * len(a) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return FFElem(self.field, self.field._reduce(prod))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in finite field")
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.field(other) * self.inverse()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field(other)
        if not isinstance(other, FFElem):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def frobenius(self):
        return self ** self.field.p

    def pth_root(self):
        return self ** (self.field.order // self.field.p)

    def in_prime_field(self) -> bool:
        return not any(self.coeffs[1:])

    def sort_key(self):
        return tuple(reversed(self.coeffs))

    def __repr__(self):
        if self.field.degree == 1:
            return str(self.coeffs[0])
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else (f"{c}*x" if i == 1 else f"{c}*x^{i}").replace("1*", "", 1 if c == 1 else 0))
        return "+".join(terms) or "0"


class _Infinity:
    """The point at infinity of P^1 over any field."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def sort_key(self):
        return (float("inf"),)

    def __reduce__(self):
        return (_Infinity, ())


INFTY = _Infinity()
