"""Exact complex algebraic numbers."""
from __future__ import annotations

import enum
from fractions import Fraction

from flint import acb, arb, fmpq, fmpq_poly
from gmpy2 import is_square, isqrt, mpq

from ..errors import DomainError
from . import field as fld
from .ball import acb_rect, arb_interval, fmpq_to_q, q_to_fmpq, workprec
from .rect import Rectangle, to_mpq
from .roots import eps_bits, rootset
from .upoly import RationalPoly, factor


_X2P1 = RationalPoly([1, 0, 1])


class Order(enum.Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


def _as_number(x) -> "AlgebraicNumber":
    if isinstance(x, AlgebraicNumber):
        return x
    return AlgebraicNumber.rational(x)


class AlgebraicNumber:
    """A complex algebraic number.

    Internally a number is an element of some simple extension field with
    a fixed embedding.  The canonical description (irreducible minimal
    polynomial plus isolating box) is computed on demand.
    """

    __slots__ = ("field", "elem", "_min_poly", "_index", "_box")

    def __init__(self, field: fld.NumberField, elem: fmpq_poly, box: Rectangle | None = None):
        self.field = field
        self.elem = elem
        self._min_poly = None
        self._index = None
        self._box = box

    # construction -------------------------------------------------------
    @classmethod
    def rational(cls, q) -> "AlgebraicNumber":
        if isinstance(q, fmpq):
            c = q
        else:
            c = q_to_fmpq(to_mpq(q))
        return cls(fld.QQ, fmpq_poly([c]))

    @classmethod
    def root(cls, poly: RationalPoly, index: int) -> "AlgebraicNumber":
        """Root ``index`` (in RootSet order) of an irreducible polynomial."""
        F, e = fld.generator(poly, index)
        out = cls(F, e)
        out._min_poly, out._index = poly, index
        return out

    @classmethod
    def from_box(cls, poly: RationalPoly, box: Rectangle) -> "AlgebraicNumber":
        if not poly.is_irreducible():
            raise ValueError(f"{poly} is not irreducible")
        k = rootset(poly).find_index(box)
        out = cls.root(poly, k)
        out._box = box
        return out

    @classmethod
    def in_field(cls, poly: RationalPoly, index: int, coords) -> "AlgebraicNumber":
        """sum coords[k] * theta**k where theta is root ``index`` of poly."""
        F = fld.get_field(poly, index)
        e = fmpq_poly([q_to_fmpq(to_mpq(c)) for c in coords])
        return cls(F, F.reduce(e))

    @classmethod
    def sqrt_of(cls, q) -> "AlgebraicNumber":
        return cls.rational(q).sqrt()

    @classmethod
    def i(cls) -> "AlgebraicNumber":
        # roots of x^2 + 1 are ordered -i, i
        return cls.root(_X2P1, 1)

    # canonical description ---------------------------------------------
    def _canon(self):
        if self._min_poly is None:
            mp = self.field.min_poly(self.elem)
            if mp.degree == 1:
                k = 0
            else:
                k = fld.locate(mp, self.enclose)
            self._min_poly, self._index = mp, k
        return self._min_poly, self._index

    @property
    def min_poly(self) -> RationalPoly:
        return self._canon()[0]

    @property
    def root_index(self) -> int:
        return self._canon()[1]

    @property
    def degree(self) -> int:
        return self.min_poly.degree

    @property
    def box(self) -> Rectangle:
        if self._box is not None:
            return self._box
        if self.is_rational():
            q = self.to_mpq()
            return Rectangle(q, q, mpq(0), mpq(0))
        mp, k = self._canon()
        return rootset(mp).initial[k]

    def is_rational(self) -> bool:
        return self.elem.degree() <= 0

    def is_zero(self) -> bool:
        return self.elem.is_zero()

    def to_mpq(self) -> mpq:
        if not self.is_rational():
            raise ValueError("not a rational number")
        cs = self.elem.coeffs()
        return fmpq_to_q(cs[0]) if cs else mpq(0)

    def to_fraction(self) -> Fraction:
        q = self.to_mpq()
        return Fraction(int(q.numerator), int(q.denominator))

    # numerics ------------------------------------------------------------
    def enclose(self, bits: int = 53) -> acb:
        return self.field.enclose(self.elem, bits)

    def rect(self, bits: int = 53) -> Rectangle:
        return acb_rect(self.enclose(bits))

    def __complex__(self) -> complex:
        z = self.enclose(60)
        return complex(float(z.real.mid()), float(z.imag.mid()))

    def __float__(self) -> float:
        z = self.enclose(60)
        return float(z.real.mid())

    def to_mpmath(self, bits: int = 200):
        import mpmath
        z = self.enclose(bits + 8)
        with mpmath.workprec(bits + 8):
            re, im = arb_interval(z.real).mid, arb_interval(z.imag).mid
            return mpmath.mpc(mpmath.mpf(int(re.numerator)) / int(re.denominator),
                              mpmath.mpf(int(im.numerator)) / int(im.denominator))

    # arithmetic ----------------------------------------------------------
    def _lift(self, other: "AlgebraicNumber"):
        if other.field is self.field:
            return self.field, self.elem, other.elem
        F, ia, ib = fld.common_field(self.field, other.field)
        return F, fld.embed(self.elem, F, ia), fld.embed(other.elem, F, ib)

    def __add__(self, other) -> "AlgebraicNumber":
        other = _as_number(other)
        F, a, b = self._lift(other)
        return AlgebraicNumber(F, a + b)

    __radd__ = __add__

    def __neg__(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self.field, -self.elem)

    def __sub__(self, other) -> "AlgebraicNumber":
        other = _as_number(other)
        F, a, b = self._lift(other)
        return AlgebraicNumber(F, a - b)

    def __rsub__(self, other) -> "AlgebraicNumber":
        return _as_number(other) - self

    def __mul__(self, other) -> "AlgebraicNumber":
        other = _as_number(other)
        F, a, b = self._lift(other)
        return AlgebraicNumber(F, F.mul(a, b))

    __rmul__ = __mul__

    def inv(self) -> "AlgebraicNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return AlgebraicNumber(self.field, self.field.inv(self.elem))

    def __truediv__(self, other) -> "AlgebraicNumber":
        return self * _as_number(other).inv()

    def __rtruediv__(self, other) -> "AlgebraicNumber":
        return _as_number(other) * self.inv()

    def __pow__(self, k: int) -> "AlgebraicNumber":
        if k < 0 and self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return AlgebraicNumber(self.field, self.field.power(self.elem, k))

    def sqrt(self) -> "AlgebraicNumber":
        """Principal square root: Re >= 0, and Im >= 0 when Re = 0."""
        if self.is_zero():
            return self
        if self.is_rational():
            q = self.to_mpq()
            n, d = abs(q.numerator), q.denominator
            if is_square(n) and is_square(d):
                r = AlgebraicNumber.rational(mpq(isqrt(n), isqrt(d)))
                return r if q > 0 else r * AlgebraicNumber.i()
        neg_real = self.is_real() and self.sign() < 0

        def enc(bits):
            z = self.enclose(2 * bits + 16)
            with workprec(2 * bits + 16):
                if neg_real:
                    return acb(0, (-z.real).sqrt())
                return z.sqrt()
        mp = self.min_poly.compose_square()
        f, k = fld.select_root([g for g, _ in factor(mp)], enc)
        if 1 < f.degree <= self.field.degree:
            s = self._sqrt_in_field(f)
            if s is not None:
                return s
        out = AlgebraicNumber.root(f, k)
        self._register_sqrt_embedding(out)
        return out

    def _sqrt_in_field(self, f: RationalPoly):
        """Square root inside our own field, if f and x^2 - self share one root there."""
        K, a = self.field, self.elem
        # reduce f(x) modulo x^2 - a, keeping r1*x + r0 with r0, r1 in K
        r0, r1 = fmpq_poly([]), fmpq_poly([])
        for c in reversed(f.coeffs):
            # (r1 x + r0) * x + c = r1 a + (r0) x + c
            r0, r1 = K.reduce(K.mul(r1, a) + c), r0
        if r1.is_zero():
            return None
        s = -K.mul(r0, K.inv(r1))
        if K.mul(s, s) != K.reduce(a):
            return None
        s = AlgebraicNumber(K, s)
        # choose the principal sign: Re > 0, or Re = 0 and Im > 0
        part, bits = "real", 32
        while True:
            z = s.enclose(bits)
            iv = arb_interval(z.real if part == "real" else z.imag)
            if iv.lo > 0:
                return s
            if iv.hi < 0:
                return -s
            if part == "real" and bits >= 128 and (s + s.conj()).is_zero():
                part = "imag"
            bits *= 2

    def _register_sqrt_embedding(self, s: "AlgebraicNumber") -> None:
        # theta_K = h(self) = h(s^2) makes K a subfield of Q(s)
        K = self.field
        if K.degree == 1 or s.field is K:
            return
        h = fld.express_in_powers(K, self.elem)
        if h is None:
            return
        F = s.field
        s2 = F.mul(s.elem, s.elem)
        fld.add_embedding(K, F, F.evaluate(h, s2))

    # predicates -----------------------------------------------------------
    def equals(self, other) -> bool:
        other = _as_number(other)
        if other.field is self.field:
            return self.elem == other.elem
        if self.is_rational() and other.is_rational():
            return self.to_mpq() == other.to_mpq()
        # different fields: compare canonical descriptions
        return self._canon() == other._canon()

    def __eq__(self, other) -> bool:
        if not isinstance(other, (AlgebraicNumber, int, Fraction)) and not isinstance(other, type(mpq(0))):
            return NotImplemented
        return self.equals(other)

    def __ne__(self, other) -> bool:
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.to_fraction())
        return hash(self._canon())

    def is_real(self) -> bool:
        if self.field.real or self.is_rational():
            return True
        mp, k = self._canon()
        return rootset(mp).real[k]

    def sign(self) -> int:
        """Sign of a real number."""
        if not self.is_real():
            raise DomainError("sign of a non-real number")
        if self.is_zero():
            return 0
        if self.is_rational():
            q = self.to_mpq()
            return (q > 0) - (q < 0)
        bits = 32
        while True:
            iv = arb_interval(self.enclose(bits).real)
            if iv.lo > 0:
                return 1
            if iv.hi < 0:
                return -1
            bits *= 2

    def compare_real(self, other) -> Order:
        other = _as_number(other)
        if not (self.is_real() and other.is_real()):
            raise DomainError("compare_real needs real numbers")
        a, b = arb_interval(self.enclose(40).real), arb_interval(other.enclose(40).real)
        if a.hi < b.lo:
            return Order.LESS
        if b.hi < a.lo:
            return Order.GREATER
        s = (other - self).sign()
        return Order.LESS if s > 0 else (Order.GREATER if s < 0 else Order.EQUAL)

    def __lt__(self, other) -> bool:
        return self.compare_real(other) is Order.LESS

    def __le__(self, other) -> bool:
        return self.compare_real(other) is not Order.GREATER

    def __gt__(self, other) -> bool:
        return self.compare_real(other) is Order.GREATER

    def __ge__(self, other) -> bool:
        return self.compare_real(other) is not Order.LESS

    # conjugation and parts ---------------------------------------------
    def conj(self) -> "AlgebraicNumber":
        if self.is_rational() or self.field.real:
            return self
        K = self.field
        img = K.conj_image()
        if img is not None:
            return AlgebraicNumber(K, K.evaluate(self.elem, img))
        cidx = K.roots.conj_index(K.index)
        Kc, tbar = fld.generator(K.poly, cidx)
        # sum c_j * conj(theta)^j, computed in the field holding conj(theta)
        return AlgebraicNumber(Kc, Kc.evaluate(self.elem, tbar))

    def re_part(self) -> "AlgebraicNumber":
        if self.is_real():
            return self
        return (self + self.conj()) / 2

    def im_part(self) -> "AlgebraicNumber":
        if self.is_real():
            return AlgebraicNumber.rational(0)
        return (self - self.conj()) * AlgebraicNumber.i() * AlgebraicNumber.rational(mpq(-1, 2))

    def abs_sq(self) -> "AlgebraicNumber":
        if self.is_real():
            return self * self
        return self * self.conj()

    # boxes ----------------------------------------------------------------
    def refine(self, eps) -> "AlgebraicNumber":
        eps = to_mpq(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        if self.is_rational():
            return self
        mp, k = self._canon()
        out = AlgebraicNumber(self.field, self.elem, rootset(mp).rect_below(k, eps))
        out._min_poly, out._index = mp, k
        return out

    # serialization ----------------------------------------------------------
    def to_json(self, fields: list | None = None) -> dict:
        """Canonical form; with a field table also the in-field coordinates.

        ``fields`` is a list of NumberFields shared by a whole document, so
        that many numbers from one field reload without recomputing a
        compositum per number.
        """
        out = {"min_poly": [int(c) for c in self.min_poly.coeffs],
               "box": self.box.to_strings()}
        if fields is not None and self.field.degree > 1 and not self.is_rational():
            if self.field not in fields:
                fields.append(self.field)
            out["field"] = fields.index(self.field)
            out["coords"] = [str(fmpq_to_q(c)) for c in self.elem.coeffs()]
        return out

    @classmethod
    def from_json(cls, d: dict, fields: list | None = None) -> "AlgebraicNumber":
        poly = RationalPoly([int(c) for c in d["min_poly"]])
        box = Rectangle.from_strings(d["box"])
        if poly.degree == 1:
            c0, c1 = poly.coeffs
            out = cls.rational(mpq(-c0, c1))
            if not box.is_point():
                out._box = box
            return out
        if fields is not None and "field" in d:
            F = fields[d["field"]]
            out = cls.in_field(F.poly, F.index, d["coords"])
            mp, k = out._canon()
            if mp != poly or rootset(poly).find_index(box) != k:
                raise ValueError("coordinates disagree with the canonical description")
            out._box = box
            return out
        return cls.from_box(poly, box)

    def __repr__(self) -> str:
        if self.is_rational():
            return f"AlgebraicNumber({self.to_mpq()})"
        z = complex(self)
        return f"AlgebraicNumber(~{z.real:.6g}{z.imag:+.6g}i)"


def compare_real(a, b) -> Order:
    return _as_number(a).compare_real(b)


def equals(a, b) -> bool:
    return _as_number(a).equals(b)


def field_to_json(F: fld.NumberField) -> dict:
    return {"min_poly": [int(c) for c in F.poly.coeffs],
            "box": rootset(F.poly).initial[F.index].to_strings()}


def field_from_json(d: dict) -> fld.NumberField:
    poly = RationalPoly([int(c) for c in d["min_poly"]])
    if not poly.is_irreducible():
        raise ValueError(f"{poly} is not irreducible")
    return fld.get_field(poly, rootset(poly).find_index(Rectangle.from_strings(d["box"])))


def isolate(poly: RationalPoly) -> list[AlgebraicNumber]:
    """All distinct roots of poly as algebraic numbers."""
    out = []
    for f, _ in factor(poly):
        for k in range(len(rootset(f))):
            out.append(AlgebraicNumber.root(f, k))
    return out
