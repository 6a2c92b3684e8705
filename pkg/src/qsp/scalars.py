"""
Exact arithmetic in the field Q(q) of rational functions in one variable.

Elements are stored as a coprime pair of flint ``fmpq_poly`` objects with a
monic denominator, so two elements are equal iff their stored pairs are equal.

>>> a = RatFuncQ.parse("q - q^-1")
>>> a
RatFuncQ('q - q^-1')
>>> a.bar() == -a
True
>>> q_binomial(2, 1)
RatFuncQ('q + q^-1')
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

from flint import fmpq, fmpq_poly

from .errors import InvalidArgument, InvalidScalar, ParseError

__all__ = [
    "RatFuncQ", "ZERO", "ONE", "Q", "q_pow", "q_int", "q_factorial",
    "q_binomial", "parse",
]

_P0 = fmpq_poly([])
_P1 = fmpq_poly([1])


def _monomial(k: int) -> fmpq_poly:
    return fmpq_poly([0] * k + [1])


def _reverse(p: fmpq_poly) -> fmpq_poly:
    # p(1/q) * q^deg(p)
    return fmpq_poly(p.coeffs()[::-1])


class RatFuncQ:
    """An element of Q(q); immutable and hashable."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1):
        num = _as_poly(num)
        den = _as_poly(den)
        if den.is_zero():
            raise InvalidScalar("zero denominator")
        if num.is_zero():
            num, den = _P0, _P1
        else:
            g = num.gcd(den)
            if not g.is_one():
                num = num / g
                den = den / g
            lc = den.leading_coefficient()
            if lc != 1:
                num = num / lc
                den = den / lc
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, num: fmpq_poly, den: fmpq_poly) -> "RatFuncQ":
        # caller guarantees canonical form
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def parse(cls, text: str) -> "RatFuncQ":
        return parse(text)

    # -- predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_laurent(self) -> bool:
        """True if the denominator is a power of q."""
        c = self.den.coeffs()
        return c[-1] == 1 and not any(c[:-1])

    def is_constant(self) -> bool:
        return self.den.is_one() and self.num.degree() <= 0

    # -- field operations -----------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        if self.den == other.den:
            return RatFuncQ(self.num + other.num, self.den)
        return RatFuncQ(self.num * other.den + other.num * self.den,
                        self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFuncQ._raw(-self.num, self.den)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        a, b, c, d = self.num, self.den, other.num, other.den
        if b.is_one() and d.is_one():
            return RatFuncQ._raw(a * c, _P1)
        g1 = a.gcd(d)
        g2 = c.gcd(b)
        if not g1.is_one():
            a = a / g1
            d = d / g1
        if not g2.is_one():
            c = c / g2
            b = b / g2
        num = a * c
        den = b * d
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        return RatFuncQ._raw(num, den)

    __rmul__ = __mul__

    def inv(self) -> "RatFuncQ":
        if self.num.is_zero():
            raise InvalidScalar("inverse of zero")
        return RatFuncQ(self.den, self.num)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inv()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inv() ** (-n)
        return RatFuncQ._raw(self.num ** n, self.den ** n)

    def bar(self) -> "RatFuncQ":
        """Substitute q -> 1/q."""
        if self.is_constant():
            return self
        shift = self.den.degree() - self.num.degree()
        num = _reverse(self.num)
        den = _reverse(self.den)
        if shift > 0:
            num = num * _monomial(shift)
        elif shift < 0:
            den = den * _monomial(-shift)
        return RatFuncQ(num, den)

    def __call__(self, value):
        """Evaluate at a rational point (used only for diagnostics)."""
        value = Fraction(value)
        x = fmpq(value.numerator, value.denominator)
        d = self.den(x)
        if d == 0:
            raise InvalidScalar("pole")
        r = self.num(x) / d
        return Fraction(int(r.p), int(r.q))

    # -- comparison / hashing ---------------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(self.num.coeffs()), tuple(self.den.coeffs())))
        return self._hash

    # -- printing ---------------------------------------------------------------

    def __str__(self):
        if self.is_laurent():
            return _poly_str(self.num, -self.den.degree())
        return f"({_poly_str(self.num, 0)})/({_poly_str(self.den, 0)})"

    def __repr__(self):
        return f"RatFuncQ({str(self)!r})"


def _as_poly(x) -> fmpq_poly:
    if isinstance(x, fmpq_poly):
        return x
    if isinstance(x, Fraction):
        return fmpq_poly([fmpq(x.numerator, x.denominator)])
    if isinstance(x, (int, fmpq)):
        return fmpq_poly([x])
    if isinstance(x, (list, tuple)):
        return fmpq_poly(list(x))
    raise TypeError(f"cannot convert {type(x).__name__} to a polynomial")


def _coerce(x):
    if isinstance(x, RatFuncQ):
        return x
    if isinstance(x, int):
        return _INT_CACHE.get(x) or RatFuncQ._raw(fmpq_poly([x]) if x else _P0, _P1)
    if isinstance(x, (Fraction, fmpq)):
        return RatFuncQ(x)
    return NotImplemented


def _fmt_coeff(c: fmpq) -> str:
    return str(c.p) if c.q == 1 else f"{c.p}/{c.q}"


def _poly_str(p: fmpq_poly, shift: int) -> str:
    """Print p * q^shift with descending exponents."""
    coeffs = p.coeffs()
    if not coeffs:
        return "0"
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        e = k + shift
        neg = c < 0
        a = -c if neg else c
        if e == 0:
            body = _fmt_coeff(a)
        else:
            mono = "q" if e == 1 else f"q^{e}"
            body = mono if a == 1 else f"{_fmt_coeff(a)}*{mono}"
        if not parts:
            parts.append("-" + body if neg else body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


ZERO = RatFuncQ._raw(_P0, _P1)
ONE = RatFuncQ._raw(_P1, _P1)
_INT_CACHE = {0: ZERO, 1: ONE}
for _k in (-2, -1, 2):
    _INT_CACHE[_k] = RatFuncQ(_k)


@lru_cache(maxsize=None)
def q_pow(k: int) -> RatFuncQ:
    """The monomial q^k (k may be negative)."""
    if k >= 0:
        return RatFuncQ._raw(_monomial(k), _P1)
    return RatFuncQ._raw(_P1, _monomial(-k))


Q = q_pow(1)


@lru_cache(maxsize=None)
def q_int(n: int, d: int = 1) -> RatFuncQ:
    """The quantum integer [n]_{q^d} = (q^{dn} - q^{-dn}) / (q^d - q^{-d})."""
    if d < 1:
        raise InvalidArgument("d must be a positive integer")
    if n < 0:
        return -q_int(-n, d)
    # Laurent expansion: sum_{k=0}^{n-1} q^{d(n-1-2k)}
    total = ZERO
    for k in range(n):
        total = total + q_pow(d * (n - 1 - 2 * k))
    return total


@lru_cache(maxsize=None)
def q_factorial(n: int, d: int = 1) -> RatFuncQ:
    if n < 0:
        raise InvalidArgument("q_factorial needs n >= 0")
    out = ONE
    for k in range(1, n + 1):
        out = out * q_int(k, d)
    return out


@lru_cache(maxsize=None)
def q_binomial(m: int, s: int, d: int = 1) -> RatFuncQ:
    if m < 0 or s < 0 or s > m:
        raise InvalidArgument(f"q_binomial({m}, {s}) out of range")
    return q_factorial(m, d) / (q_factorial(s, d) * q_factorial(m - s, d))


# -- parsing --------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(q)|(\^)|([-+*/()])|(−))")


def _tokenize(text: str) -> list[str]:
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r} at {pos} in {text!r}")
        pos = m.end()
        if m.group(5):
            out.append("-")
        else:
            out.append(next(g for g in m.groups() if g is not None))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ParseError(f"expected {expected or 'token'} in {self.text!r}")
        self.i += 1
        return tok

    def expr(self) -> RatFuncQ:
        val = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self) -> RatFuncQ:
        val = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op == "*":
                val = val * rhs
            else:
                if rhs.is_zero():
                    raise InvalidScalar(f"division by zero in {self.text!r}")
                val = val / rhs
        return val

    def unary(self) -> RatFuncQ:
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> RatFuncQ:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            exp = self.exponent()
            if exp < 0 and base.is_zero():
                raise InvalidScalar(f"negative power of zero in {self.text!r}")
            base = base ** exp
        return base

    def exponent(self) -> int:
        paren = self.peek() == "("
        if paren:
            self.take()
        sign = 1
        while self.peek() in ("-", "+"):
            if self.take() == "-":
                sign = -sign
        tok = self.take()
        if not tok.isdigit():
            raise ParseError(f"integer exponent expected in {self.text!r}")
        if paren:
            self.take(")")
        return sign * int(tok)

    def atom(self) -> RatFuncQ:
        tok = self.take()
        if tok.isdigit():
            return RatFuncQ(int(tok))
        if tok == "q":
            return Q
        if tok == "(":
            val = self.expr()
            self.take(")")
            return val
        raise ParseError(f"unexpected {tok!r} in {self.text!r}")


def parse(text: str) -> RatFuncQ:
    """Parse an expression in q: integers, q, ^, + - * /, parentheses."""
    p = _Parser(text)
    if not p.toks:
        raise ParseError("empty expression")
    val = p.expr()
    if p.peek() is not None:
        raise ParseError(f"trailing input {p.peek()!r} in {text!r}")
    return val
