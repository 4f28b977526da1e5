"""Exact rational intervals and complex rectangles.

Endpoints are gmpy2 ``mpq``.  Arithmetic is exact; ``rounded(bits)`` snaps
endpoints outward to dyadic rationals so that long computations do not
drag enormous denominators around.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpq, mpz, isqrt

ZERO = mpq(0)
ONE = mpq(1)


def to_mpq(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(x)
    return mpq(x)


def floor_dyadic(q: mpq, bits: int) -> mpq:
    s = mpz(1) << bits
    return mpq((q.numerator * s) // q.denominator, s)


def ceil_dyadic(q: mpq, bits: int) -> mpq:
    s = mpz(1) << bits
    return mpq(-((-q.numerator * s) // q.denominator), s)


def sqrt_bounds(q: mpq, bits: int) -> tuple[mpq, mpq]:
    """Dyadic lo <= sqrt(q) <= hi for q >= 0, hi - lo <= 2**-bits."""
    if q < 0:
        raise ValueError("sqrt of negative rational")
    s = mpz(1) << (2 * bits)
    n = (q.numerator * s) // q.denominator
    r = isqrt(n)
    lo = mpq(r, mpz(1) << bits)
    hi = mpq(r + 1, mpz(1) << bits)
    return lo, hi


@dataclass(frozen=True, slots=True)
class Interval:
    lo: mpq
    hi: mpq

    @staticmethod
    def point(q) -> "Interval":
        q = to_mpq(q)
        return Interval(q, q)

    def __add__(self, o: "Interval") -> "Interval":
        return Interval(self.lo + o.lo, self.hi + o.hi)

    def __sub__(self, o: "Interval") -> "Interval":
        return Interval(self.lo - o.hi, self.hi - o.lo)

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __mul__(self, o: "Interval") -> "Interval":
        if self.lo == self.hi and o.lo == o.hi:
            p = self.lo * o.lo
            return Interval(p, p)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(ps), max(ps))

    def scale(self, q: mpq) -> "Interval":
        a, b = self.lo * q, self.hi * q
        return Interval(a, b) if a <= b else Interval(b, a)

    def sqr(self) -> "Interval":
        if self.lo >= 0:
            return Interval(self.lo * self.lo, self.hi * self.hi)
        if self.hi <= 0:
            return Interval(self.hi * self.hi, self.lo * self.lo)
        return Interval(ZERO, max(self.lo * self.lo, self.hi * self.hi))

    def inverse(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains zero")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, o: "Interval") -> "Interval":
        return self * o.inverse()

    def sqrt(self, bits: int = 64) -> "Interval":
        lo = max(self.lo, ZERO)
        return Interval(sqrt_bounds(lo, bits)[0], sqrt_bounds(self.hi, bits)[1])

    @property
    def width(self) -> mpq:
        return self.hi - self.lo

    @property
    def mid(self) -> mpq:
        return (self.lo + self.hi) / 2

    def contains(self, q) -> bool:
        return self.lo <= q <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def overlaps(self, o: "Interval") -> bool:
        return self.lo <= o.hi and o.lo <= self.hi

    def inside(self, o: "Interval") -> bool:
        return o.lo <= self.lo and self.hi <= o.hi

    def rounded(self, bits: int) -> "Interval":
        return Interval(floor_dyadic(self.lo, bits), ceil_dyadic(self.hi, bits))

    def hull(self, o: "Interval") -> "Interval":
        return Interval(min(self.lo, o.lo), max(self.hi, o.hi))


@dataclass(frozen=True, slots=True)
class Rectangle:
    """Axis-parallel rectangle [re_lo, re_hi] x [im_lo, im_hi] in C."""

    re_lo: mpq
    re_hi: mpq
    im_lo: mpq
    im_hi: mpq

    def __post_init__(self):
        if self.re_lo > self.re_hi or self.im_lo > self.im_hi:
            raise ValueError("empty rectangle")

    @staticmethod
    def from_intervals(re: Interval, im: Interval) -> "Rectangle":
        return Rectangle(re.lo, re.hi, im.lo, im.hi)

    @staticmethod
    def point(re, im=0) -> "Rectangle":
        re, im = to_mpq(re), to_mpq(im)
        return Rectangle(re, re, im, im)

    @property
    def re(self) -> Interval:
        return Interval(self.re_lo, self.re_hi)

    @property
    def im(self) -> Interval:
        return Interval(self.im_lo, self.im_hi)

    @property
    def width(self) -> mpq:
        return self.re_hi - self.re_lo

    @property
    def height(self) -> mpq:
        return self.im_hi - self.im_lo

    @property
    def size(self) -> mpq:
        return max(self.width, self.height)

    def is_point(self) -> bool:
        return self.re_lo == self.re_hi and self.im_lo == self.im_hi

    def is_real_segment(self) -> bool:
        return self.im_lo == 0 and self.im_hi == 0

    def __add__(self, o: "Rectangle") -> "Rectangle":
        return Rectangle(self.re_lo + o.re_lo, self.re_hi + o.re_hi,
                         self.im_lo + o.im_lo, self.im_hi + o.im_hi)

    def __sub__(self, o: "Rectangle") -> "Rectangle":
        return Rectangle(self.re_lo - o.re_hi, self.re_hi - o.re_lo,
                         self.im_lo - o.im_hi, self.im_hi - o.im_lo)

    def __neg__(self) -> "Rectangle":
        return Rectangle(-self.re_hi, -self.re_lo, -self.im_hi, -self.im_lo)

    def __mul__(self, o: "Rectangle") -> "Rectangle":
        a, b, c, d = self.re, self.im, o.re, o.im
        if self.is_real_segment() and o.is_real_segment():
            return Rectangle.from_intervals(a * c, Interval(ZERO, ZERO))
        return Rectangle.from_intervals(a * c - b * d, a * d + b * c)

    def scale(self, q) -> "Rectangle":
        q = to_mpq(q)
        return Rectangle.from_intervals(self.re.scale(q), self.im.scale(q))

    def conj(self) -> "Rectangle":
        return Rectangle(self.re_lo, self.re_hi, -self.im_hi, -self.im_lo)

    def abs_sq(self) -> Interval:
        return self.re.sqr() + self.im.sqr()

    def inverse(self) -> "Rectangle":
        n = self.abs_sq()
        if n.lo <= 0:
            raise ZeroDivisionError("rectangle may contain zero")
        inv = n.inverse()
        return Rectangle.from_intervals(self.re * inv, (-self.im) * inv)

    def __truediv__(self, o: "Rectangle") -> "Rectangle":
        return self * o.inverse()

    def sqr(self) -> "Rectangle":
        a, b = self.re, self.im
        return Rectangle.from_intervals(a.sqr() - b.sqr(), (a * b).scale(mpq(2)))

    def contains(self, re, im=0) -> bool:
        return self.re_lo <= re <= self.re_hi and self.im_lo <= im <= self.im_hi

    def contains_zero(self) -> bool:
        return self.contains(ZERO, ZERO)

    def overlaps(self, o: "Rectangle") -> bool:
        return (self.re_lo <= o.re_hi and o.re_lo <= self.re_hi
                and self.im_lo <= o.im_hi and o.im_lo <= self.im_hi)

    def inside(self, o: "Rectangle") -> bool:
        return (o.re_lo <= self.re_lo and self.re_hi <= o.re_hi
                and o.im_lo <= self.im_lo and self.im_hi <= o.im_hi)

    def rounded(self, bits: int) -> "Rectangle":
        return Rectangle.from_intervals(self.re.rounded(bits), self.im.rounded(bits))

    def mid(self) -> tuple[mpq, mpq]:
        return self.re.mid, self.im.mid

    def to_strings(self) -> list[str]:
        return [f"{q.numerator}/{q.denominator}" for q in
                (self.re_lo, self.re_hi, self.im_lo, self.im_hi)]

    @staticmethod
    def from_strings(items) -> "Rectangle":
        return Rectangle(*(mpq(s) for s in items))
