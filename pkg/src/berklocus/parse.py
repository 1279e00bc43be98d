"""Recursive-descent parser for rational functions in z with the symbol p."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError, ZeroDenominator
from .padic import FieldContext, make_context
from .poly import Poly, poly_gcd
from .rational_map import MobiusMap, RationalMap

_TOKEN = re.compile(r"\s*(?:(\d+)|([zp])|(\*\*|[-+*/^()]))")


@dataclass(frozen=True)
class Token:
    kind: str  # int | sym | op | end
    text: str
    offset: int


def tokenize(text: str) -> list:
    out, pos = [], 0
    raw = text.encode()
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", _byte_offset(text, bad))
        start = m.start(m.lastindex)
        kind = ("int", "sym", "op")[m.lastindex - 1]
        tok = m.group(m.lastindex)
        out.append(Token(kind, "^" if tok == "**" else tok, _byte_offset(text, start)))
        pos = m.end()
    out.append(Token("end", "", len(raw)))
    return out


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode())


class _Rat:
    """A rational function num/den over Q during parsing."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly):
        self.num, self.den = num, den

    @classmethod
    def const(cls, c):
        return cls(Poly([Fraction(c)]), Poly([Fraction(1)]))

    def __add__(self, o):
        return _Rat(self.num * o.den + o.num * self.den, self.den * o.den)

    def __sub__(self, o):
        return _Rat(self.num * o.den - o.num * self.den, self.den * o.den)

    def __mul__(self, o):
        return _Rat(self.num * o.num, self.den * o.den)

    def div(self, o, offset):
        if o.num.is_zero():
            raise ZeroDenominator("division by zero", offset)
        return _Rat(self.num * o.den, self.den * o.num)

    def __neg__(self):
        return _Rat(-self.num, self.den)


class _Parser:
    def __init__(self, text: str, prime: int):
        self.toks = tokenize(text)
        self.i = 0
        self.prime = prime

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def eat(self, text=None, kind=None) -> Token:
        t = self.tok
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind):
            want = repr(text) if text is not None else kind
            got = repr(t.text) if t.kind != "end" else "end of input"
            raise ParseError(f"expected {want}, found {got}", t.offset)
        self.i += 1
        return t

    def parse(self) -> _Rat:
        r = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.offset)
        return r

    def expr(self) -> _Rat:
        r = self.term()
        while self.tok.text in ("+", "-"):
            op = self.eat().text
            rhs = self.term()
            r = r + rhs if op == "+" else r - rhs
        return r

    def _starts_primary(self) -> bool:
        return self.tok.kind in ("int", "sym") or self.tok.text == "("

    def term(self) -> _Rat:
        r = self.unary()
        while self.tok.text in ("*", "/") or self._starts_primary():
            if self.tok.text == "*":
                self.eat()
                r = r * self.unary()
            elif self.tok.text == "/":
                off = self.eat().offset
                r = r.div(self.unary(), off)
            else:
                r = r * self.power()
        return r

    def unary(self) -> _Rat:
        if self.tok.text == "-":
            self.eat()
            return -self.unary()
        if self.tok.text == "+":
            self.eat()
            return self.unary()
        return self.power()

    def power(self) -> _Rat:
        base = self.primary()
        if self.tok.text == "^":
            self.eat()
            e = int(self.eat(kind="int").text)
            out = _Rat.const(1)
            for _ in range(e):
                out = out * base
            return out
        return base

    def primary(self) -> _Rat:
        t = self.tok
        if t.kind == "int":
            self.eat()
            return _Rat.const(int(t.text))
        if t.kind == "sym":
            self.eat()
            if t.text == "p":
                return _Rat.const(self.prime)
            return _Rat(Poly([Fraction(0), Fraction(1)]), Poly([Fraction(1)]))
        if t.text == "(":
            self.eat()
            r = self.expr()
            self.eat(")")
            return r
        got = repr(t.text) if t.kind != "end" else "end of input"
        raise ParseError(f"expected a number, z, p or '(', found {got}", t.offset)


def parse_rational_function(text: str, prime: int):
    """(num, den) over Q in lowest terms with a monic denominator."""
    r = _Parser(text, prime).parse()
    if r.den.is_zero():
        raise ZeroDenominator("denominator is zero", 0)
    n, d = r.num, r.den
    if not n.is_zero():
        g = poly_gcd(n, d)
        if g.degree > 0:
            n, d = n // g, d // g
    else:
        d = Poly([Fraction(1)])
    lc = d.lc()
    return n * (1 / lc), d * (1 / lc)


@dataclass(frozen=True)
class MapSpec:
    text: str
    prime: int
    unram: int = 1
    ram: int = 1
    precision: int = 64
    num: Poly = None
    den: Poly = None

    @classmethod
    def parse(cls, text: str, prime: int, unram: int = 1, ram: int = 1, precision: int = 64) -> MapSpec:
        n, d = parse_rational_function(text, prime)
        return cls(text, prime, unram, ram, precision, n, d)

    def context(self) -> FieldContext:
        return make_context(self.prime, self.unram, self.ram, self.precision)

    def to_map(self) -> RationalMap:
        return RationalMap.from_rational(self.context(), self.num, self.den)

    def canonical_text(self) -> str:
        return format_rational_function(self.num, self.den)

    def same_map(self, other: MapSpec) -> bool:
        return (self.prime, self.unram, self.ram, self.precision, self.num, self.den) == (
            other.prime, other.unram, other.ram, other.precision, other.num, other.den)


def parse_map(text: str, prime: int, **kw) -> MapSpec:
    return MapSpec.parse(text, prime, **kw)


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"({c.numerator}/{c.denominator})"


def format_poly(f: Poly) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for i in range(f.degree, -1, -1):
        c = Fraction(f[i])
        if c == 0:
            continue
        mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
        a = abs(c)
        if mono and a == 1:
            body = mono
        elif mono:
            body = f"{_fmt_coeff(a)}*{mono}"
        else:
            body = _fmt_coeff(a)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


def format_rational_function(num: Poly, den: Poly) -> str:
    if den.degree == 0 and den[0] == 1:
        return format_poly(num)
    return f"({format_poly(num)})/({format_poly(den)})"


def parse_mobius(text: str, prime: int) -> MobiusMap:
    """A Mobius map given as a rational expression of degree 1 in z."""
    n, d = parse_rational_function(text, prime)
    if max(n.degree, d.degree) != 1:
        raise ParseError("conjugating map must have degree 1", 0)
    m = MobiusMap(Fraction(n[1]), Fraction(n[0]), Fraction(d[1]), Fraction(d[0]))
    if m.det() == 0:
        raise ParseError("conjugating map is degenerate", 0)
    return m
