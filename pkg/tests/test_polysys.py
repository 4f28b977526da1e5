import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from hypdecide.errors import DomainError, ResourceLimitError
from hypdecide.polysys import (GREVLEX, LEX, Ideal, MultiPoly, dimension, eliminate, format_ideal,
                               groebner, in_ideal, parse_ideal, parse_poly, reduce,
                               solve_zero_dim)

NAMES = ["x", "y", "z"]


def P(text, names=NAMES):
    return parse_poly(text, names)


def test_parse_and_format_round_trip():
    I = parse_ideal("vars: x y\nx^2 + y - 1\nx*y - 3/2  # comment\n")
    J = parse_ideal(format_ideal(I))
    assert [g.terms for g in I.gens] == [g.terms for g in J.gens]
    assert I.nvars == 2


def test_parse_rejects_bad_input():
    with pytest.raises(ValueError):
        parse_poly("x^y", NAMES)
    with pytest.raises(ValueError):
        parse_poly("w + 1", NAMES)
    with pytest.raises(ValueError):
        parse_ideal("")


def test_arithmetic():
    f = P("x + y")
    g = P("x - y")
    assert (f * g).terms == P("x^2 - y^2").terms
    assert (f ** 2 - f * f).is_zero()


def test_groebner_of_circle_and_line():
    I = Ideal([P("x^2 + y^2 - 1"), P("x - y")], 3, LEX)
    G = groebner(I)
    assert in_ideal(P("2*y^2 - 1"), G)
    assert not in_ideal(P("y - 1"), G)


def test_unit_ideal():
    I = Ideal([P("x"), P("x - 1")], 3)
    assert groebner(I).is_unit()
    assert dimension(I) == -1
    assert solve_zero_dim(I) == []


def test_dimension():
    assert dimension(Ideal([P("x*y")], 3)) == 2
    assert dimension(Ideal([P("x - 1"), P("y - 2"), P("z^2 - 3")], 3)) == 0
    assert dimension(Ideal([P("x^2 + y^2 - 1")], 3)) == 2
    assert dimension(Ideal([P("x^2 + y^2 - 1"), P("z")], 3)) == 1


def test_eliminate():
    I = Ideal([P("x^2 - 2"), P("y - x^3"), P("z - 1")], 3)
    p = eliminate(I, 1)                      # y = x^3 = 2x, so y^2 = 8
    assert p.monic() == [-8, 0, 1]
    with pytest.raises(DomainError):
        eliminate(Ideal([P("x*y")], 3), 0)


def test_solve_zero_dim_points():
    I = Ideal([P("x^2 - 2"), P("y - x"), P("z^2 + 1")], 3)
    pts = solve_zero_dim(I)
    assert len(pts) == 4
    for x, y, z in pts:
        assert (x * x).equals(2) and x.equals(y) and (z * z).equals(-1)


def test_solve_grid_cap():
    I = Ideal([P("x^3 - 2"), P("y^3 - 3"), P("z^3 - 5")], 3)
    with pytest.raises(ResourceLimitError):
        solve_zero_dim(I, grid_cap=10)


def test_step_budget():
    gens = [P("x^3*y - z^2 + 1"), P("y^3 - x*z + 2"), P("z^3 - x^2*y + 3")]
    with pytest.raises(ResourceLimitError):
        groebner(Ideal(gens, 3, GREVLEX), max_steps=1)


small = st.integers(-3, 3)


@settings(max_examples=25, deadline=None)
@given(small, small, small, small)
def test_points_satisfy_system(a, b, c, d):
    # x^2 = a^2 + 1 (never zero), y = b x + c, z = d
    I = Ideal([P(f"x^2 - {a * a + 1}"), P(f"y - {b}*x - {c}"), P(f"z - {d}")], 3)
    pts = solve_zero_dim(I)
    assert len(pts) == 2
    for pt in pts:
        for g in I.gens:
            assert g.evaluate(pt).is_zero()


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(small, small, small, st.integers(-4, 4)), min_size=1, max_size=3))
def test_generators_reduce_to_zero(rows):
    gens = [P(f"{a}*x^2 + {b}*x*y + {c}*z + {e}") for a, b, c, e in rows]
    I = Ideal(gens, 3, GREVLEX)
    G = groebner(I)
    for g in gens:
        assert reduce(g, G.gens, GREVLEX).is_zero()


def test_multipoly_evaluate_rational():
    f = P("x^2*y - 3*z")
    assert f.evaluate([mpq(2), mpq(3), mpq(1)]).equals(9)
