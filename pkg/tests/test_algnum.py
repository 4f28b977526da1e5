import random

import mpmath
import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import Skip, eval_exact, eval_float, inside, random_tree

from hypdecide.algnum import (AlgebraicNumber, Order, RationalPoly, compare_real, field_from_json,
                              field_to_json, isolate, isolate_roots)
from hypdecide.errors import DomainError

AN = AlgebraicNumber


def quad(p, b, d, q=1):
    return (AN.rational(p) + AN.sqrt_of(d) * b) / q


quads = st.builds(quad, st.integers(-9, 9), st.integers(-3, 3),
                  st.sampled_from([2, 3, 5, -1, -3]), st.integers(1, 5))


# examples ----------------------------------------------------------------------

def test_sqrt2_squared_is_two():
    r = AN.sqrt_of(2)
    assert (r * r).equals(2)
    assert r.compare_real(mpq(141421, 100000)) is Order.GREATER
    assert r.compare_real(mpq(141422, 100000)) is Order.LESS


def test_i_squared():
    i = AN.i()
    assert (i * i).equals(-1)
    assert not i.is_real()
    assert i.conj().equals(-i)


def test_min_poly_of_sum_of_roots():
    x = AN.sqrt_of(2) + AN.sqrt_of(3)
    assert x.degree == 4
    # x^4 - 10 x^2 + 1
    assert (x ** 4 - 10 * x * x + 1).is_zero()


def test_rational_shortcuts():
    a = AN.rational(mpq(3, 4))
    assert a.is_rational() and a.to_mpq() == mpq(3, 4)
    assert (a * a.inv()).equals(1)


def test_inverse_of_zero_raises():
    with pytest.raises((DomainError, ZeroDivisionError)):
        AN.rational(0).inv()


def test_compare_real_example():
    # the golden ratio is bigger than 8/5
    phi = (1 + AN.sqrt_of(5)) / 2
    assert compare_real(phi, mpq(8, 5)) is Order.GREATER
    assert compare_real(mpq(8, 5), phi) is Order.LESS
    assert compare_real(phi, phi) is Order.EQUAL


def test_compare_real_listed_examples():
    r2 = AN.sqrt_of(2)
    assert compare_real(r2, mpq(3, 2)) is Order.LESS
    assert compare_real(r2, AN.sqrt_of(2)) is Order.EQUAL
    # sqrt2 + sqrt3 = 3.1462... exceeds 22/7 = 3.1428...
    assert compare_real(r2 + AN.sqrt_of(3), mpq(22, 7)) is Order.GREATER


def test_equality_examples():
    x = [r for r in isolate(RationalPoly([-4, 0, 2])) if r.sign() > 0][0]
    assert x.equals(AN.sqrt_of(2))
    assert not AN.sqrt_of(2).equals(-AN.sqrt_of(2))
    assert (AN.sqrt_of(2) * AN.sqrt_of(3)).equals(AN.sqrt_of(6))


def test_compare_real_rejects_complex():
    with pytest.raises(DomainError):
        compare_real(AN.i(), 0)


def test_sqrt_principal_branch():
    s = AN.rational(-4).sqrt()
    assert s.equals(2 * AN.i())
    assert AN.rational(9).sqrt().equals(3)
    z = (3 + 4 * AN.i()).sqrt()
    assert z.equals(2 + AN.i())


def test_re_im_parts():
    z = quad(1, 2, -1)          # 1 + 2i
    assert z.re_part().equals(1) and z.im_part().equals(2)
    assert z.abs_sq().equals(5)


def test_refine_shrinks_box():
    x = AN.sqrt_of(7)
    r = x.refine(mpq(1, 2 ** 100))
    assert r.box.size <= mpq(1, 2 ** 100)
    assert r.equals(x)


def test_isolate_counts_and_values():
    p = RationalPoly([-2, 0, 1])      # x^2 - 2
    roots = isolate(p)
    assert len(roots) == 2
    assert sorted(r.sign() for r in roots) == [-1, 1]
    cubic = RationalPoly([1, 0, 0, 1])   # x^3 + 1: one real, two complex
    rs = isolate(cubic)
    assert len(rs) == 3
    assert sum(r.is_real() for r in rs) == 1
    boxes = isolate_roots(cubic)
    assert len(boxes) == 3


def test_isolate_repeated_factor():
    p = RationalPoly([1, -2, 1])      # (x - 1)^2
    rs = isolate(p)
    assert len(rs) == 1 and rs[0].equals(1)


def test_json_round_trip():
    x = AN.sqrt_of(2) + AN.sqrt_of(-3)
    fields = []
    d = x.to_json(fields)
    fs = [field_from_json(field_to_json(F)) for F in fields]
    y = AN.from_json(d, fs)
    assert y.equals(x)
    assert AN.from_json(AN.rational(mpq(5, 7)).to_json()).equals(mpq(5, 7))


# properties ------------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(quads, quads, quads)
def test_field_axioms(x, y, z):
    assert (x + y).equals(y + x)
    assert (x * y).equals(y * x)
    assert ((x + y) + z).equals(x + (y + z))
    assert (x * (y + z)).equals(x * y + x * z)
    assert (x - x).is_zero()
    if not x.is_zero():
        assert (x / x).equals(1)


@settings(max_examples=40, deadline=None)
@given(quads)
def test_sqrt_squares_back(x):
    s = x.sqrt()
    assert (s * s).equals(x)
    # principal branch: real part >= 0
    assert s.re_part().sign() >= 0


@settings(max_examples=30, deadline=None)
@given(quads, quads)
def test_compare_matches_floats(x, y):
    if not (x.is_real() and y.is_real()):
        return
    with mpmath.workprec(200):
        fx, fy = mpmath.re(x.to_mpmath(200)), mpmath.re(y.to_mpmath(200))
    o = x.compare_real(y)
    if o is Order.EQUAL:
        assert abs(fx - fy) < mpmath.mpf(2) ** -150
    else:
        assert (fx < fy) == (o is Order.LESS)


def test_random_trees_against_floats():
    rng = random.Random(11)
    for _ in range(300):
        t = random_tree(rng, depth=5)
        try:
            x = eval_exact(t)
        except (Skip, ZeroDivisionError):
            continue
        y = eval_float(t)
        with mpmath.workprec(200):
            if x.is_zero():
                assert abs(y) < mpmath.mpf(2) ** -150
            else:
                assert inside(x.refine(mpq(1, 2 ** 60)).box, y)
