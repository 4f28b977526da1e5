import json

import mpmath
import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from hypdecide.algnum import AlgebraicNumber, Interval
from hypdecide.errors import DomainError
from hypdecide.fixtures import load_fixture
from hypdecide.geom import IsometricSphere, MatrixSL2, diag
from hypdecide.poincare import (AcceptState, Certificate, accept_step, angle_sum_ok,
                                check_angle_list, cosine_argument, cycle_angle_sum,
                                dihedral_angle_bounds, edge_cycles, membership_search)
from hypdecide.repfind import Presentation, Representation
from hypdecide.wordproblem import FreeGroupOracle, oracle_from_spec

Q = AlgebraicNumber.rational


def unit_sphere_at(x, y, z):
    return IsometricSphere((Q(x), Q(y), Q(z)), Q(1))


# angles -------------------------------------------------------------------------

def test_cosine_arguments():
    S0 = unit_sphere_at(0, 0, 0)
    assert cosine_argument(S0, unit_sphere_at(1, 1, 0)).equals(0)
    assert cosine_argument(S0, unit_sphere_at(1, 1, 1)).equals(Q(mpq(1, 2)))


@settings(max_examples=20, deadline=None)
@given(st.fractions(min_value=mpq(1, 10), max_value=mpq(199, 100)),
       st.sampled_from([mpq(1, 2 ** 10), mpq(1, 2 ** 20), mpq(1, 2 ** 40)]))
def test_angle_interval_contains_float_angle(d, eps):
    # two unit spheres whose centres are d apart, 0 < d < 2
    S0 = unit_sphere_at(0, 0, 0)
    S1 = IsometricSphere((Q(mpq(d.numerator, d.denominator)), Q(0), Q(0)), Q(1))
    iv = dihedral_angle_bounds(S0, S1, eps)
    assert iv.width < eps
    with mpmath.workprec(200):
        x = (mpmath.mpf(d.numerator) / d.denominator) ** 2
        a = mpmath.acos((x - 2) / 2)
        lo = mpmath.mpf(int(iv.lo.numerator)) / int(iv.lo.denominator)
        hi = mpmath.mpf(int(iv.hi.numerator)) / int(iv.hi.denominator)
        assert lo <= a <= hi


def test_disjoint_spheres_have_no_angle():
    with pytest.raises(DomainError):
        dihedral_angle_bounds(unit_sphere_at(0, 0, 0), unit_sphere_at(3, 0, 0))
    with pytest.raises(DomainError):
        dihedral_angle_bounds(unit_sphere_at(0, 0, 0), unit_sphere_at(2, 0, 0))


def test_angle_sum_rule():
    eps = mpq(1, 2 ** 20)
    S0 = unit_sphere_at(0, 0, 0)
    right = dihedral_angle_bounds(S0, unit_sphere_at(1, 1, 0), eps)
    third = dihedral_angle_bounds(S0, unit_sphere_at(1, 1, 1), eps)
    assert check_angle_list([right] * 4)
    assert check_angle_list([third] * 6)
    assert not check_angle_list([right] * 3)
    assert not check_angle_list([right] * 5)
    assert not angle_sum_ok(Interval(mpq(4), mpq(8)))


# membership ---------------------------------------------------------------------

def test_membership_cases():
    A = diag(2)
    m = membership_search(A * A, [A], budget=100)
    assert m.status == "member" and m.word == (1, 1)
    m = membership_search(A.inv() * A.inv() * A.inv(), [A], budget=100)
    assert m.status == "member" and m.word == (-1, -1, -1)
    m = membership_search(MatrixSL2.identity(), [A])
    assert m.status == "member" and m.word == ()
    m = membership_search(diag(mpq(3, 2)), [A], budget=100)
    assert m.status == "non_member" and m.word == (1,)
    m = membership_search(A * A * A * A * A, [A], budget=3)
    assert m.status == "timeout"


# the dodecahedral fixture ------------------------------------------------------------

@pytest.fixture(scope="module")
def sw():
    pres, rep = load_fixture("seifert_weber")
    oracle = oracle_from_spec("linear:seifert_weber", pres.gens)
    st_ = AcceptState(rep, pres)
    for _ in range(10):
        accept_step(st_, oracle, 12)
        if st_.accepted:
            break
    assert st_.accepted, st_.status
    return st_, oracle


def test_edge_cycles_partition_edges(sw):
    st_, _ = sw
    cert = st_.certificate
    K = cert.complex
    seen = []
    for c in cert.cycles:
        seen += list(c.edges)
    assert len(seen) == len(set(seen)) == len(K.edges) == 30
    assert len(cert.cycles) == 6
    assert all(len(c.edges) == 5 for c in cert.cycles)
    assert all(c.sign in (1, -1) for c in cert.cycles)
    # recomputing gives the same cycles
    again = edge_cycles(K, cert.pairing)
    assert [c.faces for c in again] == [c.faces for c in cert.cycles]


def test_angle_sums_contain_two_pi(sw):
    cert = sw[0].certificate
    with mpmath.workprec(200):
        two_pi = 2 * mpmath.pi
        for c in cert.cycles:
            t = cycle_angle_sum(c, cert.complex, mpq(1, 2 ** 30))
            lo = mpmath.mpf(int(t.lo.numerator)) / int(t.lo.denominator)
            hi = mpmath.mpf(int(t.hi.numerator)) / int(t.hi.denominator)
            assert lo <= two_pi <= hi


def test_certificate_verifies_and_is_deterministic(sw):
    st_, oracle = sw
    text = st_.certificate.dumps()
    cert = Certificate.loads(text)
    assert cert.verify(oracle).ok
    assert cert.verify().ok           # oracle rebuilt from the recorded description
    assert cert.dumps() == text


def test_certificate_rejects_wrong_oracle(sw):
    st_, _ = sw
    cert = Certificate.loads(st_.certificate.dumps())
    v = cert.verify(FreeGroupOracle(cert.presentation.n))
    assert not v.ok


def test_tampered_certificates_fail(sw):
    st_, oracle = sw
    d = json.loads(st_.certificate.dumps())
    # swap two face words
    bad = json.loads(json.dumps(d))
    bad["face_words"][0], bad["face_words"][1] = bad["face_words"][1], bad["face_words"][0]
    assert not Certificate.from_json(bad).verify(oracle).ok
    # a wrong generator word
    bad = json.loads(json.dumps(d))
    g = sorted(bad["gamma_words"])[0]
    bad["gamma_words"][g] = bad["gamma_words"][g] + [1, -1, 1]
    assert not Certificate.from_json(bad).verify(oracle).ok
    # wrong sign on a cycle
    bad = json.loads(json.dumps(d))
    bad["cycles"][0]["sign"] = -bad["cycles"][0]["sign"]
    assert not Certificate.from_json(bad).verify(oracle).ok
    # not a certificate at all
    with pytest.raises(ValueError):
        Certificate.from_json({"format": "something else"})


def test_accept_on_elliptic_reports_NE_failure():
    pres = Presentation(["a", "b"], [])
    rep = Representation([MatrixSL2(0, -1, 1, mpq(1, 2)), diag(2)])
    st_ = AcceptState(rep, pres)
    accept_step(st_, FreeGroupOracle(2), 4)
    assert st_.status == "condition_NE_fails" and st_.outcome == "continue"
