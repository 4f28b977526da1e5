"""Exact arithmetic with complex algebraic numbers."""
from .number import (AlgebraicNumber, Order, compare_real, equals, field_from_json,
                     field_to_json, isolate)
from .rect import Interval, Rectangle
from .roots import isolate_roots
from .upoly import RationalPoly

__all__ = ["AlgebraicNumber", "Order", "compare_real", "equals", "isolate",
           "field_to_json", "field_from_json",
           "Interval", "Rectangle", "isolate_roots", "RationalPoly",
           "add", "mul", "neg", "inv", "sqrt", "re_part", "im_part", "refine"]


def add(a, b):
    return a + b


def mul(a, b):
    return a * b


def neg(a):
    return -a


def inv(a):
    return a.inv()


def sqrt(a):
    return a.sqrt()


def re_part(a):
    return a.re_part()


def im_part(a):
    return a.im_part()


def refine(a, eps):
    return a.refine(eps)
