"""Bridge between FLINT ball arithmetic and exact rational rectangles.

FLINT keeps its working precision in a process-wide context, so every
ball computation goes through ``workprec`` which serializes access.
"""
from __future__ import annotations

import math
import threading
from contextlib import contextmanager

from flint import acb, arb, ctx, fmpq
from gmpy2 import mpq, mpz

from .rect import Interval, Rectangle

_PREC_LOCK = threading.RLock()


@contextmanager
def workprec(bits: int):
    with _PREC_LOCK:
        old = ctx.prec
        ctx.prec = max(int(bits), 53)
        try:
            yield
        finally:
            ctx.prec = old


def _dyadic(man_exp) -> mpq:
    m, e = man_exp
    m, e = int(m), int(e)
    if e >= 0:
        return mpq(mpz(m) << e)
    return mpq(m, mpz(1) << (-e))


def arb_interval(x: arb) -> Interval:
    mid = _dyadic(x.mid().man_exp())
    rad = _dyadic(x.rad().man_exp())
    return Interval(mid - rad, mid + rad)


def acb_rect(z: acb) -> Rectangle:
    return Rectangle.from_intervals(arb_interval(z.real), arb_interval(z.imag))


def q_to_fmpq(q) -> fmpq:
    q = mpq(q)
    return fmpq(int(q.numerator), int(q.denominator))


def fmpq_to_q(q: fmpq) -> mpq:
    return mpq(int(q.p), int(q.q))


def rel_bits(z: acb) -> int:
    """Absolute accuracy of a complex ball in bits."""
    r = max(float(z.real.rad()), float(z.imag.rad()))
    if r == 0:
        return 10 ** 6
    return int(-math.log2(r))
