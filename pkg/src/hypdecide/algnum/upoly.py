"""Univariate polynomials over Q in canonical primitive-integer form.

Factorization is delegated to FLINT; everything else (power sums,
composed sums/products, exact evaluation) lives here.
"""
from __future__ import annotations

from functools import reduce
from math import gcd

from flint import fmpz_poly
from gmpy2 import mpq, mpz

from .rect import Interval, Rectangle


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


class RationalPoly:
    """Polynomial with rational coefficients stored as primitive integers.

    Coefficients run from the constant term upward.  The leading
    coefficient is positive and the content is 1.  The zero polynomial is
    ``RationalPoly.ZERO`` and has no degree.
    """

    __slots__ = ("coeffs", "_hash")
    ZERO: "RationalPoly"

    def __init__(self, coeffs, _canonical: bool = False):
        if _canonical:
            self.coeffs = tuple(coeffs)
        else:
            self.coeffs = _canonicalize(coeffs)
        self._hash = hash(self.coeffs)

    @classmethod
    def from_roots_of(cls, fpoly: fmpz_poly) -> "RationalPoly":
        return cls([int(c) for c in fpoly.coeffs()])

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self):
        return None if not self.coeffs else len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"RationalPoly({list(self.coeffs)})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mon = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mon and abs(c) == 1:
                s = mon
            else:
                s = f"{abs(c)}{'*' + mon if mon else ''}"
            terms.append(("-" if c < 0 else "+") + s)
        out = "".join(terms)
        return out[1:] if out.startswith("+") else out

    def flint(self) -> fmpz_poly:
        return fmpz_poly(list(self.coeffs))

    def monic(self) -> list[mpq]:
        lc = mpq(self.coeffs[-1])
        return [mpq(c) / lc for c in self.coeffs]

    def derivative(self) -> "RationalPoly":
        return RationalPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def eval_q(self, x: mpq) -> mpq:
        acc = mpq(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def sign_at(self, x: mpq) -> int:
        # exact sign with a single common denominator
        n, d = mpz(x.numerator), mpz(x.denominator)
        acc = mpz(0)
        dp = mpz(1)
        for c in reversed(self.coeffs):
            acc = acc * n + c * dp
            dp *= d
        return (acc > 0) - (acc < 0)

    def eval_interval(self, x: Interval) -> Interval:
        acc = Interval.point(0)
        for c in reversed(self.coeffs):
            acc = acc * x + Interval.point(c)
        return acc

    def eval_rect(self, z: Rectangle) -> Rectangle:
        acc = Rectangle.point(0)
        for c in reversed(self.coeffs):
            acc = acc * z + Rectangle.point(c)
        return acc

    def compose_neg(self) -> "RationalPoly":
        return RationalPoly([c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)])

    def reverse(self) -> "RationalPoly":
        return RationalPoly(list(reversed(self.coeffs)))

    def compose_square(self) -> "RationalPoly":
        out = [0] * (2 * len(self.coeffs) - 1)
        for k, c in enumerate(self.coeffs):
            out[2 * k] = c
        return RationalPoly(out)

    def scale_var(self, q: mpq) -> "RationalPoly":
        """Polynomial whose roots are q times the roots of self."""
        # p(x/q) * q^n
        n = len(self.coeffs) - 1
        num, den = int(q.numerator), int(q.denominator)
        return RationalPoly([c * den ** k * num ** (n - k) for k, c in enumerate(self.coeffs)])

    def shift_var(self, q: mpq) -> "RationalPoly":
        """Polynomial whose roots are the roots of self plus q."""
        # p(x - q): Horner composition with exact rationals
        acc = [mpq(0)]
        lin = [-q, mpq(1)]
        for c in reversed(self.coeffs):
            prod = [mpq(0)] * (len(acc) + 1)
            for i, a in enumerate(acc):
                prod[i] += a * lin[0]
                prod[i + 1] += a * lin[1]
            prod[0] += c
            acc = prod
        return RationalPoly(acc)

    def is_irreducible(self) -> bool:
        if self.degree is None or self.degree < 1:
            return False
        _, facs = self.flint().factor()
        return len(facs) == 1 and facs[0][1] == 1


def _canonicalize(coeffs) -> tuple:
    qs = [c if isinstance(c, type(mpq(0))) else mpq(c) for c in coeffs]
    while qs and qs[-1] == 0:
        qs.pop()
    if not qs:
        return ()
    den = reduce(_lcm, (int(q.denominator) for q in qs), 1)
    ints = [int(q.numerator) * (den // int(q.denominator)) for q in qs]
    g = reduce(gcd, ints, 0)
    if ints[-1] < 0:
        g = -g
    return tuple(i // g for i in ints)


RationalPoly.ZERO = RationalPoly((), _canonical=True)
X = RationalPoly([0, 1])


def factor(p: RationalPoly) -> list[tuple[RationalPoly, int]]:
    """Irreducible factors with multiplicities (non-constant factors only)."""
    if p.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    if p.degree == 0:
        return []
    _, facs = p.flint().factor()
    out = [(RationalPoly.from_roots_of(f), int(m)) for f, m in facs]
    out.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs))
    return out


def squarefree_part(p: RationalPoly) -> RationalPoly:
    f = p.flint()
    g = f.gcd(f.derivative())
    q, r = divmod(f, g)
    return RationalPoly.from_roots_of(q)


def power_sums(p: RationalPoly, count: int) -> list[mpq]:
    """p_0..p_{count-1}, the power sums of the roots of p."""
    n = p.degree
    a = p.monic()  # a[n] == 1
    s = [mpq(n)]
    for k in range(1, count):
        acc = mpq(0)
        if k <= n:
            acc = k * a[n - k]
            for i in range(1, k):
                acc += a[n - i] * s[k - i]
        else:
            for i in range(1, n + 1):
                acc += a[n - i] * s[k - i]
        s.append(-acc)
    return s


def from_power_sums(s: list[mpq], n: int) -> RationalPoly:
    """Monic degree-n polynomial with power sums s_1..s_n (s[0] ignored)."""
    e = [mpq(1)]
    for k in range(1, n + 1):
        acc = mpq(0)
        sign = 1
        for i in range(1, k + 1):
            acc += sign * e[k - i] * s[i]
            sign = -sign
        e.append(acc / k)
    coeffs = [mpq(0)] * (n + 1)
    for k in range(n + 1):
        coeffs[n - k] = e[k] if k % 2 == 0 else -e[k]
    return RationalPoly(coeffs)


def _binomials(n: int) -> list[list[int]]:
    rows = [[1]]
    for k in range(1, n + 1):
        prev = rows[-1]
        rows.append([1] + [prev[i - 1] + prev[i] for i in range(1, k)] + [1])
    return rows


def composed_sum(a: RationalPoly, b: RationalPoly) -> RationalPoly:
    """Polynomial whose roots are alpha + beta over all root pairs.

    Equal, up to a constant, to res_y(a(x - y), b(y)).
    """
    m, n = a.degree, b.degree
    N = m * n
    sa, sb = power_sums(a, N + 1), power_sums(b, N + 1)
    # exponential generating functions multiply
    fact = [mpq(1)]
    for k in range(1, N + 1):
        fact.append(fact[-1] * k)
    ea = [sa[k] / fact[k] for k in range(N + 1)]
    eb = [sb[k] / fact[k] for k in range(N + 1)]
    s = [mpq(0)] * (N + 1)
    for k in range(N + 1):
        acc = mpq(0)
        for t in range(k + 1):
            acc += ea[t] * eb[k - t]
        s[k] = acc * fact[k]
    return from_power_sums(s, N)


def composed_product(a: RationalPoly, b: RationalPoly) -> RationalPoly:
    """Polynomial whose roots are alpha * beta; res_y(y^m a(x/y), b(y))."""
    m, n = a.degree, b.degree
    N = m * n
    sa, sb = power_sums(a, N + 1), power_sums(b, N + 1)
    return from_power_sums([x * y for x, y in zip(sa, sb)], N)
