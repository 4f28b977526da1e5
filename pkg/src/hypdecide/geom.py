"""Exact hyperbolic geometry in the upper half-space and ball models.

Points of both models are quaternions a + bi + cj with vanishing
k-component.  SL2 matrices with complex algebraic entries act on upper
half-space by q -> (aq + b)(cq + d)^-1, and on the ball by conjugating with
the Cayley-type map f(w) = (w - j)(w + j)^-1 j.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .algnum import AlgebraicNumber, Order
from .errors import DomainError

AN = AlgebraicNumber
_ZERO = AN.rational(0)
_ONE = AN.rational(1)


def num(x) -> AlgebraicNumber:
    if isinstance(x, AlgebraicNumber):
        return x
    return AN.rational(x)


def cnum(re, im=0) -> AlgebraicNumber:
    """re + i*im as one complex algebraic number."""
    re, im = num(re), num(im)
    if im.is_zero():
        return re
    return re + im * AN.i()


class Quaternion:
    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        self.a, self.b, self.c, self.d = num(a), num(b), num(c), num(d)

    @classmethod
    def from_complex(cls, z: AlgebraicNumber) -> "Quaternion":
        z = num(z)
        if z.is_real():
            return cls(z)
        return cls(z.re_part(), z.im_part())

    @classmethod
    def point(cls, x, y, z) -> "Quaternion":
        return cls(x, y, z, 0)

    def coords(self) -> tuple:
        return (self.a, self.b, self.c)

    def __add__(self, o):
        o = o if isinstance(o, Quaternion) else Quaternion(o)
        return Quaternion(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def __sub__(self, o):
        o = o if isinstance(o, Quaternion) else Quaternion(o)
        return Quaternion(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __neg__(self):
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, o):
        if not isinstance(o, Quaternion):
            o = num(o)
            return Quaternion(self.a * o, self.b * o, self.c * o, self.d * o)
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def norm_sq(self) -> AlgebraicNumber:
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def conj(self):
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def inv(self):
        n = self.norm_sq()
        if n.is_zero():
            raise ZeroDivisionError("inverse of the zero quaternion")
        return self.conj() * n.inv()

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in (self.a, self.b, self.c, self.d))

    def __eq__(self, o):
        if not isinstance(o, Quaternion):
            return NotImplemented
        return all(x == y for x, y in zip((self.a, self.b, self.c, self.d), (o.a, o.b, o.c, o.d)))

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def __repr__(self):
        return "Q(%.6g, %.6g, %.6g, %.6g)" % tuple(float(x) for x in (self.a, self.b, self.c, self.d))


J = Quaternion(0, 0, 1, 0)
_MINUS_J = Quaternion(0, 0, -1, 0)


class MatrixSL2:
    """2x2 matrix [[a, b], [c, d]] with ad - bc = 1."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d, check: bool = True):
        self.a, self.b, self.c, self.d = num(a), num(b), num(c), num(d)
        if check and not (self.a * self.d - self.b * self.c).equals(1):
            raise DomainError("determinant is not 1")

    @classmethod
    def identity(cls) -> "MatrixSL2":
        return cls(1, 0, 0, 1, check=False)

    @property
    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, o: "MatrixSL2") -> "MatrixSL2":
        return MatrixSL2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                         self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d, check=False)

    def inv(self) -> "MatrixSL2":
        return MatrixSL2(self.d, -self.b, -self.c, self.a, check=False)

    def __neg__(self) -> "MatrixSL2":
        return MatrixSL2(-self.a, -self.b, -self.c, -self.d, check=False)

    def trace(self) -> AlgebraicNumber:
        return self.a + self.d

    def is_identity(self) -> bool:
        return self.b.is_zero() and self.c.is_zero() and self.a.equals(1) and self.d.equals(1)

    def is_minus_identity(self) -> bool:
        return self.b.is_zero() and self.c.is_zero() and self.a.equals(-1) and self.d.equals(-1)

    def is_pm_identity(self) -> bool:
        return self.is_identity() or self.is_minus_identity()

    def commutes_with(self, o: "MatrixSL2") -> bool:
        return self * o == o * self

    def __eq__(self, o) -> bool:
        if not isinstance(o, MatrixSL2):
            return NotImplemented
        return all(x.equals(y) for x, y in zip(self.entries, o.entries))

    def __hash__(self) -> int:
        return hash(self.entries)

    def same_mobius(self, o: "MatrixSL2") -> bool:
        """Equal as elements of PSL2."""
        return self == o or self == -o

    def to_json(self) -> list:
        return [x.to_json() for x in self.entries]

    @classmethod
    def from_json(cls, d) -> "MatrixSL2":
        return cls(*(AN.from_json(x) for x in d))

    def __repr__(self):
        return "MatrixSL2([[%s, %s], [%s, %s]])" % tuple(_short(x) for x in self.entries)


def _short(x: AlgebraicNumber) -> str:
    if x.is_rational():
        return str(x.to_mpq())
    z = complex(x)
    return f"{z.real:.6g}" if x.is_real() else f"({z.real:.6g}{z.imag:+.6g}i)"


def diag(a) -> MatrixSL2:
    a = num(a)
    return MatrixSL2(a, 0, 0, a.inv(), check=False)


# actions ------------------------------------------------------------------

def _assert_point(q: Quaternion) -> Quaternion:
    if not q.d.is_zero():
        raise AssertionError("k-component of a point image is not zero")
    return q


def act_half_space(A: MatrixSL2, q: Quaternion) -> Quaternion:
    if not q.d.is_zero() or q.c.sign() <= 0:
        raise DomainError("not a point of upper half-space")
    qa, qb, qc, qd = (Quaternion.from_complex(x) for x in A.entries)
    den = qc * q + qd
    if den.is_zero():
        raise AssertionError("singular denominator")
    return _assert_point((qa * q + qb) * den.inv())


def half_to_ball(q: Quaternion) -> Quaternion:
    if not q.d.is_zero() or q.c.sign() <= 0:
        raise DomainError("not a point of upper half-space")
    return _assert_point((q - J) * (q + J).inv() * J)


def ball_to_half(p: Quaternion) -> Quaternion:
    if not p.d.is_zero() or p.norm_sq().compare_real(1) is not Order.LESS:
        raise DomainError("not a point of the open ball")
    u = p * _MINUS_J
    one = Quaternion(1)
    return _assert_point((one - u).inv() * (one + u) * J)


def act_ball(A: MatrixSL2, p: Quaternion) -> Quaternion:
    return half_to_ball(act_half_space(A, ball_to_half(p)))


BALL_ORIGIN = Quaternion(0, 0, 0, 0)


# classification -----------------------------------------------------------

class Kind(enum.Enum):
    IDENTITY = "identity"
    MINUS_IDENTITY = "minus_identity"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    LOXODROMIC = "loxodromic"


def classify(A: MatrixSL2) -> Kind:
    t = A.trace()
    if not t.is_real():
        return Kind.LOXODROMIC
    if t.compare_real(2) is Order.GREATER or t.compare_real(-2) is Order.LESS:
        return Kind.LOXODROMIC
    if t.equals(2) or t.equals(-2):
        if A.is_identity():
            return Kind.IDENTITY
        if A.is_minus_identity():
            return Kind.MINUS_IDENTITY
        return Kind.PARABOLIC
    return Kind.ELLIPTIC


def eigenvectors(A: MatrixSL2) -> list[tuple]:
    """Canonical eigenvectors (x, y): (x, 1) when c != 0, otherwise (1, 0) and
    possibly (b/(d-a), 1)."""
    if A.is_pm_identity():
        raise DomainError("every vector is an eigenvector of +-I")
    a, b, c, d = A.entries
    if not c.is_zero():
        disc = (a + d) * (a + d) - 4
        s = disc.sqrt()
        xs = [(a - d + s) / (2 * c)]
        if not s.is_zero():
            xs.append((a - d - s) / (2 * c))
        return [(x, _ONE) for x in xs]
    if not (a - d).is_zero():
        return [(_ONE, _ZERO), (b / (d - a), _ONE)]
    return [(_ONE, _ZERO)]


def same_vector(u: tuple, v: tuple) -> bool:
    return u[0].equals(v[0]) and u[1].equals(v[1])


def norm_sq(A: MatrixSL2) -> AlgebraicNumber:
    return sum((x.abs_sq() for x in A.entries[1:]), A.a.abs_sq())


# isometric spheres ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class IsometricSphere:
    center: tuple
    radius_sq: AlgebraicNumber
    owner: MatrixSL2 | None = None

    @property
    def radius(self) -> AlgebraicNumber:
        return self.radius_sq.sqrt()

    def same_as(self, o: "IsometricSphere") -> bool:
        return (self.radius_sq.equals(o.radius_sq)
                and all(x.equals(y) for x, y in zip(self.center, o.center)))

    def key(self):
        return (self.center, self.radius_sq)

    def to_json(self) -> dict:
        return {"center": [x.to_json() for x in self.center],
                "radius_sq": self.radius_sq.to_json()}


def isometric_sphere(A: MatrixSL2) -> IsometricSphere:
    k = classify(A)
    if k in (Kind.ELLIPTIC, Kind.IDENTITY, Kind.MINUS_IDENTITY):
        raise DomainError(f"no isometric sphere for a {k.value} element")
    p = act_ball(A.inv(), BALL_ORIGIN)
    n = p.norm_sq()
    if n.is_zero():
        raise DomainError("element fixes the ball origin")
    center = tuple(x / n for x in p.coords())
    return IsometricSphere(center, n.inv() - 1, A)


class Side(enum.Enum):
    INSIDE = "inside"
    ON = "on"
    OUTSIDE = "outside"


def dist_sq(u: tuple, v: tuple) -> AlgebraicNumber:
    s = _ZERO
    for x, y in zip(u, v):
        t = x - y
        s = s + t * t
    return s


def point_vs_sphere(p, S: IsometricSphere) -> Side:
    if isinstance(p, Quaternion):
        p = p.coords()
    o = dist_sq(p, S.center).compare_real(S.radius_sq)
    return {Order.LESS: Side.INSIDE, Order.EQUAL: Side.ON, Order.GREATER: Side.OUTSIDE}[o]
