"""Certified isolation and refinement of the complex roots of a polynomial.

Initial enclosures come from FLINT's validated root finder; every box it
returns isolates a single root, and real roots come back with an exactly
zero imaginary part.  We convert the balls into rational rectangles, check
pairwise disjointness ourselves, and refine by re-running the solver at a
higher precision and matching the new balls against the old ones.
"""
from __future__ import annotations

import threading

from flint import acb
from gmpy2 import mpq

from .ball import acb_rect, workprec
from .rect import Rectangle
from .upoly import RationalPoly, factor, squarefree_part


def _bits(s: mpq) -> int:
    """Largest b with s < 2**-b (a lower bound is fine)."""
    if s == 0:
        return 10 ** 6
    return int(s.denominator).bit_length() - int(s.numerator).bit_length() - 1


def eps_bits(eps) -> int:
    """Bits of accuracy that guarantee a width below eps."""
    eps = mpq(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    return max(1, int(eps.denominator).bit_length() - int(eps.numerator).bit_length() + 2)


def _disjoint(rects) -> bool:
    for i in range(len(rects)):
        for j in range(i + 1, len(rects)):
            if rects[i].overlaps(rects[j]):
                return False
    return True


class RootSet:
    """All roots of a squarefree integer polynomial, in a fixed order.

    Order: real roots ascending, then non-real roots by (real part,
    imaginary part) of their first enclosure.  The order never changes
    after construction so a root index is a stable name for a root.
    """

    def __init__(self, poly: RationalPoly):
        if poly.degree is None or poly.degree < 1:
            raise ValueError("need a non-constant polynomial")
        self.poly = poly
        self._lock = threading.Lock()
        balls, prec = self._solve(64)
        rects = [acb_rect(b) for b in balls]
        real = [b.imag.is_zero() for b in balls]
        order = sorted(range(len(balls)), key=lambda k: (
            not real[k], rects[k].re.mid, rects[k].im.mid))
        self._balls = [balls[k] for k in order]
        self.real = tuple(real[k] for k in order)
        self.initial = tuple(rects[k] for k in order)
        self._rects = list(self.initial)
        self._prec = prec
        self._scale = max(1, int(max(abs(float(b.real.mid())) + abs(float(b.imag.mid()))
                                     for b in balls)) + 1).bit_length()
        self._conj = None

    def __len__(self) -> int:
        return len(self.initial)

    def _solve(self, prec: int):
        f = self.poly.flint()
        while True:
            with workprec(prec):
                roots = f.complex_roots()
            balls = [r for r, m in roots]
            if any(m != 1 for _, m in roots):
                raise ValueError("polynomial is not squarefree")
            if _disjoint([acb_rect(b) for b in balls]):
                return balls, prec
            prec *= 2

    def _refine_all(self, bits: int) -> None:
        # caller holds the lock
        prec = max(2 * self._prec, bits + self._scale + 16)
        while True:
            balls, prec = self._solve(prec)
            new_rects = [acb_rect(b) for b in balls]
            matched = []
            ok = True
            for old in self._rects:
                hits = [k for k, r in enumerate(new_rects) if r.overlaps(old)]
                if len(hits) != 1:
                    ok = False
                    break
                matched.append(hits[0])
            if ok and len(set(matched)) == len(matched):
                self._balls = [balls[k] for k in matched]
                self._rects = [new_rects[k] for k in matched]
                self._prec = prec
                if self.accuracy() >= bits:
                    return
            prec *= 2

    def accuracy(self) -> int:
        return min(_bits(r.size) for r in self._rects)

    def ball(self, i: int, bits: int = 0) -> acb:
        with self._lock:
            if bits and self.accuracy() < bits:
                self._refine_all(bits)
            return self._balls[i]

    def rect(self, i: int, bits: int = 0) -> Rectangle:
        with self._lock:
            if bits and self.accuracy() < bits:
                self._refine_all(bits)
            return self._rects[i]

    def rect_below(self, i: int, eps: mpq) -> Rectangle:
        """Enclosure of root i with width and height below eps."""
        return self.rect(i, eps_bits(eps))

    def conj_index(self, i: int) -> int:
        if self.real[i]:
            return i
        with self._lock:
            if self._conj is None:
                self._conj = self._find_conj()
            return self._conj[i]

    def _find_conj(self):
        # caller holds the lock
        while True:
            out = []
            for r in self._rects:
                c = r.conj()
                hits = [k for k, s in enumerate(self._rects) if s.overlaps(c)]
                if len(hits) != 1:
                    break
                out.append(hits[0])
            else:
                return out
            self._refine_all(self._prec + 16)

    def find_index(self, box: Rectangle, max_bits: int = 4096) -> int:
        """Index of the unique root inside ``box``; ValueError otherwise."""
        bits = 8
        while True:
            inside, unsure = [], False
            for k in range(len(self)):
                r = self.rect(k, bits)
                if r.inside(box):
                    inside.append(k)
                elif r.overlaps(box):
                    unsure = True
            if not unsure:
                if len(inside) != 1:
                    raise ValueError(f"box holds {len(inside)} roots of {self.poly}")
                return inside[0]
            if bits > max_bits:
                raise ValueError("cannot decide which root the box isolates")
            bits *= 2

    def locate(self, enclosure: Rectangle, candidates=None) -> list[int]:
        """Roots whose current box meets the enclosure."""
        ks = range(len(self)) if candidates is None else candidates
        return [k for k in ks if self._rects[k].overlaps(enclosure)]


_ROOTSETS: dict = {}
_ROOTSETS_LOCK = threading.Lock()


def rootset(poly: RationalPoly) -> RootSet:
    rs = _ROOTSETS.get(poly)
    if rs is not None:
        return rs
    rs = RootSet(poly)
    with _ROOTSETS_LOCK:
        return _ROOTSETS.setdefault(poly, rs)


def isolate_roots(p: RationalPoly) -> list[tuple[RationalPoly, Rectangle]]:
    """One (irreducible factor, isolating box) pair per distinct root.

    Boxes are pairwise disjoint across factors as well as within one.
    """
    if p.is_zero:
        raise ValueError("zero polynomial has no isolated roots")
    if p.degree == 0:
        return []
    sq = squarefree_part(p)
    facs = [f for f, _ in factor(sq)]
    sets = [rootset(f) for f in facs]
    bits = 0
    while True:
        out = []
        for f, rs in zip(facs, sets):
            for k in range(len(rs)):
                out.append((f, rs.initial[k] if bits == 0 else rs.rect(k, bits)))
        if _disjoint([b for _, b in out]):
            return out
        bits = 64 if bits == 0 else 2 * bits
