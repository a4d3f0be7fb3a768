"""Exact arithmetic for lengths.

Edge lengths live in the field Q(sqrt 2) (``Q2``).  Translation lengths of
product actions are square roots of nonnegative ``Q2`` values, and the
quantities compared by the reconstruction code are signed sums of such
roots (``RootSum``).  Signs of root sums are decided exactly: a float filter
handles the clear cases and the remaining ones go through repeated squaring
in the multiquadratic extension generated by the radicands.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from itertools import product as _cartesian
from typing import Iterable, Union

_SQRT2 = math.sqrt(2.0)

Scalar = Union[int, Fraction, "Q2"]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def _isqrt_exact(n: int) -> int | None:
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Return sqrt(q) if it is rational, else None."""
    if q < 0:
        return None
    n = _isqrt_exact(q.numerator)
    d = _isqrt_exact(q.denominator)
    if n is None or d is None:
        return None
    return Fraction(n, d)


class Q2:
    """An element ``a + b*sqrt(2)`` with rational ``a`` and ``b``."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = _frac(a)
        self.b = _frac(b)

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction) -> "Q2":
        out = object.__new__(cls)
        out.a = a
        out.b = b
        return out

    @classmethod
    def coerce(cls, x) -> "Q2":
        if isinstance(x, Q2):
            return x
        if isinstance(x, str):
            return parse_q2(x)
        return cls(_frac(x))

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return Q2._raw(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Q2._raw(-self.a, -self.b)

    def __sub__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return Q2._raw(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        if not self.b and not o.b:
            return Q2._raw(self.a * o.a, _ZERO)
        return Q2._raw(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conjugate(self) -> "Q2":
        return Q2(self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - 2 * self.b * self.b

    def __truediv__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 2)")
        num = self * o.conjugate()
        return Q2(num.a / n, num.b / n)

    def __rtruediv__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        out = Q2(1)
        for _ in range(k):
            out = out * self
        return out

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # comparisons ----------------------------------------------------------
    def sign(self) -> int:
        a, b = self.a, self.b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with 2 b^2
        diff = a * a - 2 * b * b
        return sa if diff > 0 else -sa if diff < 0 else 0

    def __eq__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __lt__(self, other):
        return (self - Q2.coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - Q2.coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - Q2.coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - Q2.coerce(other)).sign() >= 0

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __float__(self):
        return float(self.a) + float(self.b) * _SQRT2

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        return f"Q2({format_q2(self)})"

    def __str__(self):
        return format_q2(self)


_ZERO = Fraction(0)


def _coerce_or_none(x):
    if isinstance(x, Q2):
        return x
    if isinstance(x, (int, Fraction)):
        return Q2(x)
    return None


def format_q2(x: Q2) -> str:
    if x.b == 0:
        return str(x.a)
    tail = "sqrt2" if abs(x.b) == 1 else f"{abs(x.b)}*sqrt2"
    if x.a == 0:
        return ("-" if x.b < 0 else "") + tail
    return f"{x.a}{'-' if x.b < 0 else '+'}{tail}"


_TERM = re.compile(r"\s*([+-]?)\s*([0-9]+(?:/[0-9]+)?(?:\.[0-9]+)?)?\s*(\*?\s*sqrt\(?2\)?)?\s*")


def parse_q2(text: str) -> Q2:
    """Parse ``"3/2"``, ``"sqrt2"``, ``"1 + 3/4*sqrt2"``, ``"0.25"`` and the like."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty number")
    a = Fraction(0)
    b = Fraction(0)
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse number {text!r}")
        sign, num, root = m.groups()
        if num is None and root is None:
            raise ValueError(f"cannot parse number {text!r}")
        val = Fraction(num) if num is not None else Fraction(1)
        if sign == "-":
            val = -val
        if root:
            b += val
        else:
            a += val
        pos = m.end()
    return Q2(a, b)


# ---------------------------------------------------------------------------
# sums of square roots


def _normalize_term(coef: Q2, rad: Q2) -> tuple[Q2, Q2]:
    if rad.sign() < 0:
        raise ValueError("negative radicand")
    if not rad or not coef:
        return Q2(0), Q2(1)
    if rad.b == 0:
        r = rational_sqrt(rad.a)
        if r is not None:
            return coef * r, Q2(1)
        # pull the square part of the rational radicand out
        num, den = rad.a.numerator, rad.a.denominator
        # make denominator squarefree-free: sqrt(n/d) = sqrt(n*d)/d
        n = num * den
        k = _square_part(n)
        return coef * Fraction(k, den), Q2(n // (k * k))
    return coef, rad


def _square_part(n: int) -> int:
    """Largest k with k*k | n, using trial division on small primes."""
    k = 1
    p = 2
    while p * p <= n and p < 10_000:
        while n % (p * p) == 0:
            n //= p * p
            k *= p
        p += 1 if p == 2 else 2
    return k


class RootSum:
    """A finite sum ``sum_i c_i * sqrt(r_i)`` with ``c_i``, ``r_i`` in Q2, ``r_i > 0``."""

    __slots__ = ("terms", "_float")

    def __init__(self, terms: dict | None = None):
        self.terms: dict[Q2, Q2] = {}
        if terms:
            for rad, coef in terms.items():
                self._add_term(coef, rad)
        self._float = None

    def _add_term(self, coef: Q2, rad: Q2):
        coef, rad = _normalize_term(Q2.coerce(coef), Q2.coerce(rad))
        if not coef:
            return
        new = self.terms.get(rad, Q2(0)) + coef
        if new:
            self.terms[rad] = new
        else:
            self.terms.pop(rad, None)

    @classmethod
    def sqrt(cls, radicand) -> "RootSum":
        out = cls()
        out._add_term(Q2(1), Q2.coerce(radicand))
        return out

    @classmethod
    def const(cls, value) -> "RootSum":
        out = cls()
        out._add_term(Q2.coerce(value), Q2(1))
        return out

    @classmethod
    def coerce(cls, x) -> "RootSum":
        if isinstance(x, RootSum):
            return x
        return cls.const(x)

    # arithmetic -----------------------------------------------------------
    def _merged(self, other: "RootSum", sign: int) -> "RootSum":
        # both operands are normalized, so terms combine without renormalizing
        terms = dict(self.terms)
        for rad, coef in other.terms.items():
            if sign < 0:
                coef = -coef
            new = terms[rad] + coef if rad in terms else coef
            if new:
                terms[rad] = new
            else:
                del terms[rad]
        out = RootSum()
        out.terms = terms
        return out

    def __add__(self, other):
        return self._merged(RootSum.coerce(other), 1)

    __radd__ = __add__

    def __neg__(self):
        out = RootSum()
        out.terms = {r: -c for r, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self._merged(RootSum.coerce(other), -1)

    def __rsub__(self, other):
        return RootSum.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Q2)):
            q = Q2.coerce(other)
            out = RootSum()
            if q:
                out.terms = {r: c * q for r, c in self.terms.items()}
            return out
        other = RootSum.coerce(other)
        out = RootSum()
        for (r1, c1), (r2, c2) in _cartesian(self.terms.items(), other.terms.items()):
            out._add_term(c1 * c2, r1 * r2)
        return out

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Q2)):
            return self * (Q2(1) / Q2.coerce(other))
        other = RootSum.coerce(other)
        if len(other.terms) != 1:
            raise ValueError("can only divide by a single root")
        (rad, coef), = other.terms.items()
        # x / (c sqrt r) = x * sqrt(r) / (c r)
        return self * RootSum.sqrt(rad) * (Q2(1) / (coef * rad))

    # queries --------------------------------------------------------------
    def __float__(self):
        if self._float is None:
            self._float = math.fsum(float(c) * math.sqrt(float(r)) for r, c in self.terms.items())
        return self._float

    def _scale(self) -> float:
        return sum(abs(float(c)) * math.sqrt(float(r)) for r, c in self.terms.items())

    def sign(self) -> int:
        if not self.terms:
            return 0
        f = float(self)
        if abs(f) > 1e-9 * max(1.0, self._scale()):
            return 1 if f > 0 else -1
        return _exact_sign(self.terms)

    def is_zero(self) -> bool:
        return self.sign() == 0

    def square(self) -> "RootSum":
        return self * self

    def single_root(self) -> tuple[int, Q2] | None:
        """If the value is ``s*sqrt(q)`` with s in {-1,0,1}, return ``(s, q)``."""
        if not self.terms:
            return 0, Q2(0)
        if len(self.terms) != 1:
            return None
        (rad, coef), = self.terms.items()
        s = coef.sign()
        return s, coef * coef * rad

    def rational_value(self) -> Q2 | None:
        if not self.terms:
            return Q2(0)
        if len(self.terms) == 1 and Q2(1) in self.terms:
            return self.terms[Q2(1)]
        return None

    def __eq__(self, other):
        if isinstance(other, (RootSum, int, Fraction, Q2)):
            return (self - RootSum.coerce(other)).sign() == 0
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __lt__(self, other):
        return (self - RootSum.coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - RootSum.coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - RootSum.coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - RootSum.coerce(other)).sign() >= 0

    def __repr__(self):
        return f"RootSum({format_length(self)})"

    def __str__(self):
        return format_length(self)


Length = RootSum


def sqrt(x) -> RootSum:
    return RootSum.sqrt(x)


def hypot_sq(*parts) -> RootSum:
    """sqrt of a sum of squares of Q2 values."""
    total = Q2(0)
    for p in parts:
        p = Q2.coerce(p)
        total = total + p * p
    return RootSum.sqrt(total)


def _exact_sign(terms: dict) -> int:
    rads = [r for r in terms if r != Q2(1)]
    elem = {}
    for r, c in terms.items():
        key = frozenset() if r == Q2(1) else frozenset([rads.index(r)])
        elem[key] = c
    return _mq_sign(elem, rads, len(rads))


def _mq_mul(x: dict, y: dict, rads: list) -> dict:
    out: dict = {}
    for k1, c1 in x.items():
        for k2, c2 in y.items():
            c = c1 * c2
            for i in k1 & k2:
                c = c * rads[i]
            key = k1 ^ k2
            v = out.get(key, Q2(0)) + c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def _mq_sign(elem: dict, rads: list, top: int) -> int:
    elem = {k: v for k, v in elem.items() if v}
    if not elem:
        return 0
    idx = max((max(k) for k in elem if k), default=-1)
    if idx < 0:
        return elem[frozenset()].sign()
    a = {k: v for k, v in elem.items() if idx not in k}
    b = {k - {idx}: v for k, v in elem.items() if idx in k}
    sa = _mq_sign(a, rads, idx)
    sb = _mq_sign(b, rads, idx)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    a2 = _mq_mul(a, a, rads)
    b2r = {k: v * rads[idx] for k, v in _mq_mul(b, b, rads).items()}
    diff = dict(a2)
    for k, v in b2r.items():
        w = diff.get(k, Q2(0)) - v
        if w:
            diff[k] = w
        else:
            diff.pop(k, None)
    s = _mq_sign(diff, rads, idx)
    if s > 0:
        return sa
    if s < 0:
        return sb
    return 0


# ---------------------------------------------------------------------------
# formatting / parsing of length values


def format_length(x) -> str:
    """Render a length exactly: ``"1"``, ``"sqrt(2)"``, ``"sqrt(52)"``, ``"3/2"``."""
    if isinstance(x, (int, Fraction, Q2)):
        return format_q2(Q2.coerce(x))
    rv = x.rational_value()
    if rv is not None:
        return format_q2(rv)
    sr = x.single_root()
    if sr is not None:
        s, q = sr
        body = f"sqrt({format_q2(q)})"
        return ("-" if s < 0 else "") + body
    out = ""
    for rad, coef in sorted(x.terms.items(), key=lambda t: (float(t[0]), float(t[1]))):
        neg = coef.is_rational and coef.a < 0
        c = -coef if neg else coef
        if rad == Q2(1):
            body = format_q2(c)
        else:
            root = f"sqrt({format_q2(rad)})"
            if c == Q2(1):
                body = root
            elif c.is_rational:
                body = f"{format_q2(c)}*{root}"
            else:
                body = f"({format_q2(c)})*{root}"
        if not out:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out


_SQRT_RE = re.compile(r"^\s*(-?)\s*sqrt\((.*)\)\s*$")


def parse_length(text: str) -> RootSum:
    """Inverse of :func:`format_length` for single roots and Q2 values.

    Decimals are read as exact rationals (``"0.25"`` is 1/4).
    """
    m = _SQRT_RE.match(text)
    if m:
        val = RootSum.sqrt(parse_q2(m.group(2)))
        return -val if m.group(1) else val
    return RootSum.const(parse_q2(text))


def max_root(values: Iterable[RootSum]) -> RootSum:
    best = None
    for v in values:
        if best is None or v > best:
            best = v
    return best
