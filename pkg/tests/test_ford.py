import random

import mpmath
import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import float_sphere, float_vertices, random_inverse_closed, vertex_match

from hypdecide.algnum import AlgebraicNumber, Order
from hypdecide.errors import DomainError
from hypdecide.fixtures import load_fixture
from hypdecide.ford import (Arrangement, build_complex, check_face_pairings, condition_NE,
                            is_two_sphere, triple_intersection)
from hypdecide.geom import IsometricSphere, MatrixSL2, diag

Q = AlgebraicNumber.rational


def sphere(x, y, z, r2=1):
    return IsometricSphere((Q(x), Q(y), Q(z)), Q(r2))


def test_triple_intersection_example():
    pts = triple_intersection(sphere(0, 0, 0), sphere(1, 0, 0), sphere(0, 1, 0))
    assert len(pts) == 2
    h = Q(mpq(1, 2))
    zs = []
    for x, y, z in pts:
        assert x.equals(h) and y.equals(h)
        assert (z * z).equals(h)
        zs.append(z.sign())
    assert sorted(zs) == [-1, 1]


def test_triple_intersection_degenerate():
    # collinear centres: a circle at best, never isolated points
    assert triple_intersection(sphere(0, 0, 0), sphere(1, 0, 0), sphere(2, 0, 0)) == []
    # far apart: nothing
    assert triple_intersection(sphere(0, 0, 0), sphere(5, 0, 0), sphere(0, 5, 0)) == []
    with pytest.raises(DomainError):
        triple_intersection(sphere(0, 0, 0), sphere(0, 0, 0), sphere(0, 1, 0))


def test_condition_NE():
    assert condition_NE([diag(2), diag(mpq(1, 2))])
    assert not condition_NE([diag(2), MatrixSL2(0, -1, 1, 0)])
    # -A has the same sphere as A
    assert not condition_NE([diag(2), -diag(2)])


def test_cyclic_group_has_empty_K():
    K = build_complex([diag(2), diag(mpq(1, 2))])
    assert K.vertices == [] and K.faces == []
    assert not is_two_sphere(K)


def test_buried_spheres_are_hidden():
    arr = Arrangement()
    for A in (diag(2), diag(mpq(1, 2)), diag(4), diag(mpq(1, 4))):
        arr.add(A)
    # the spheres of diag(4) and its inverse lie inside those of diag(2) and its inverse
    assert sorted(arr.visible) == [0, 1]


@pytest.fixture(scope="module")
def sw_faces():
    """Face-pairing matrices of the dodecahedral fixture: the 12 images of
    the generators and their inverses."""
    _, rep = load_fixture("seifert_weber")
    P = []
    for A in rep.images:
        P += [A, A.inv()]
    return P


def test_dodecahedron_complex(sw_faces):
    K = build_complex(sw_faces)
    assert len(K.vertices) == 20
    assert len(K.edges) == 30
    assert len(K.faces) == 12
    assert is_two_sphere(K)
    pairing = check_face_pairings(K)
    assert pairing is not None
    assert all(pairing.faces[pairing.faces[f]] == f for f in pairing.faces)
    off = K.to_off().splitlines()
    assert off[0] == "OFF" and off[1] == "20 12 30"


def test_incremental_matches_batch(sw_faces):
    rng = random.Random(3)
    order = list(sw_faces)
    rng.shuffle(order)
    K1 = build_complex(sw_faces)
    K2 = build_complex(order)
    key = lambda K: sorted(tuple(float(x) for x in v) for v in K.vertices)
    assert key(K1) == key(K2)
    assert len(K1.edges) == len(K2.edges)


def test_missing_partner_fails_pairing(sw_faces):
    K = build_complex(sw_faces[:-1])
    assert not is_two_sphere(K) or check_face_pairings(K) is None


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_vertices_match_float_oracle(seed):
    P = random_inverse_closed(random.Random(seed), 8)
    K = build_complex(P)
    with mpmath.workprec(200):
        spheres = [float_sphere([x.to_mpmath(200) for x in A.entries]) for A in P]
        assert vertex_match(K.vertices, float_vertices(spheres), mpmath.mpf(2) ** -90)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_vertices_lie_on_their_spheres(seed):
    P = random_inverse_closed(random.Random(seed), 6)
    K = build_complex(P)
    for v, on in zip(K.vertices, K.on):
        assert len(on) >= 3
        for s in on:
            S = K.spheres[s]
            d = sum(((x - c) * (x - c) for x, c in zip(v, S.center)), Q(0))
            assert d.equals(S.radius_sq)
        assert sum((x * x for x in v), Q(0)).compare_real(1) is Order.LESS
