"""Independent floating-point oracles used by the tests."""
from __future__ import annotations

import random

import mpmath

from hypdecide.algnum import AlgebraicNumber

DISCRIMINANTS = (2, 3, 5, 7, -1, -2, -3)


def random_seed(rng: random.Random, ds):
    """(exact, 200-bit) pair for a rational or quadratic seed."""
    p = rng.randint(-9, 9)
    q = rng.randint(1, 6)
    if rng.random() < 0.4:
        return ("q", p, q)
    d = rng.choice(ds)
    b = rng.choice([-2, -1, 1, 1, 2, 3])
    return ("r", p, q, b, d)


def random_tree(rng: random.Random, depth: int = 6, max_sqrt: int = 2):
    ds = rng.sample(DISCRIMINANTS, 2)
    budget = [max_sqrt]

    def build(level):
        if level >= depth or (level > 0 and rng.random() < 0.25 + 0.1 * level):
            return random_seed(rng, ds)
        op = rng.choice(["+", "-", "*", "*", "inv", "neg", "sqrt"])
        if op == "sqrt":
            if budget[0] == 0:
                op = "+"
            else:
                budget[0] -= 1
        if op in ("inv", "neg", "sqrt"):
            return (op, build(level + 1))
        return (op, build(level + 1), build(level + 1))
    return build(0)


class Skip(Exception):
    pass


def eval_exact(t):
    kind = t[0]
    if kind == "q":
        return AlgebraicNumber.rational(t[1]) / t[2]
    if kind == "r":
        _, p, q, b, d = t
        return (AlgebraicNumber.rational(p) + AlgebraicNumber.sqrt_of(d) * b) / q
    if kind == "neg":
        return -eval_exact(t[1])
    if kind == "inv":
        x = eval_exact(t[1])
        if x.is_zero():
            raise Skip
        return x.inv()
    if kind == "sqrt":
        return eval_exact(t[1]).sqrt()
    a, b = eval_exact(t[1]), eval_exact(t[2])
    return a + b if kind == "+" else (a - b if kind == "-" else a * b)


def eval_float(t, prec: int = 200):
    with mpmath.workprec(prec):
        return _ev(t)


def _ev(t):
    kind = t[0]
    if kind == "q":
        return mpmath.mpc(mpmath.mpf(t[1]) / t[2])
    if kind == "r":
        _, p, q, b, d = t
        return (p + b * mpmath.sqrt(mpmath.mpc(d))) / q
    if kind == "neg":
        return -_ev(t[1])
    if kind == "inv":
        return 1 / _ev(t[1])
    if kind == "sqrt":
        x = _ev(t[1])
        # snap rounding noise off the branch cut
        if abs(x.imag) < mpmath.mpf(2) ** -150 and x.real < 0:
            x = mpmath.mpc(x.real, 0)
        return mpmath.sqrt(x)
    a, b = _ev(t[1]), _ev(t[2])
    return a + b if kind == "+" else (a - b if kind == "-" else a * b)


def mpf_of(q):
    return mpmath.mpf(int(q.numerator)) / int(q.denominator)


def inside(box, z, slack=mpmath.mpf(2) ** -150) -> bool:
    re_lo, re_hi = mpf_of(box.re_lo), mpf_of(box.re_hi)
    im_lo, im_hi = mpf_of(box.im_lo), mpf_of(box.im_hi)
    return (re_lo - slack <= z.real <= re_hi + slack
            and im_lo - slack <= z.imag <= im_hi + slack)


# floating-point sphere arrangement -------------------------------------------

def _qmul(p, q):
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2, a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2, a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2)


def _qinv(q):
    n = sum(x * x for x in q)
    return (q[0] / n, -q[1] / n, -q[2] / n, -q[3] / n)


def _qadd(p, q):
    return tuple(x + y for x, y in zip(p, q))


def _cq(z):
    return (mpmath.re(z), mpmath.im(z), 0, 0)


def float_act_ball(m, v):
    """Action of [[a, b], [c, d]] (mpc entries) on a ball point, numerically."""
    a, b, c, d = m
    J, mJ = (0, 0, 1, 0), (0, 0, -1, 0)
    one = (1, 0, 0, 0)
    u = _qmul((v[0], v[1], v[2], 0), mJ)
    w = _qmul(_qinv(_qadd(one, tuple(-x for x in u))), _qmul(_qadd(one, u), J))
    w = _qmul(_qadd(_qmul(_cq(a), w), _cq(b)), _qinv(_qadd(_qmul(_cq(c), w), _cq(d))))
    return _qmul(_qmul(_qadd(w, mJ), _qinv(_qadd(w, J))), J)[:3]


def float_sphere(m):
    a, b, c, d = m
    p = float_act_ball((d, -b, -c, a), (0, 0, 0))
    n = sum(x * x for x in p)
    return tuple(x / n for x in p), 1 / n - 1


def float_vertices(spheres, prec: int = 200, tol=None):
    """Brute force over all triples: points on three spheres, inside the
    ball, outside or on every sphere; duplicates merged."""
    with mpmath.workprec(prec):
        tol = tol or mpmath.mpf(2) ** -(prec // 2)
        out = []
        n = len(spheres)
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    for p in _triple(spheres[i], spheres[j], spheres[k]):
                        if sum(x * x for x in p) >= 1 - tol:
                            continue
                        if any(sum((x - y) ** 2 for x, y in zip(p, c)) < r2 - tol for c, r2 in spheres):
                            continue
                        if any(max(abs(x - y) for x, y in zip(p, q)) < tol for q in out):
                            continue
                        out.append(p)
        return out


def _triple(S1, S2, S3):
    (c1, r1), (c2, r2), (c3, r3) = S1, S2, S3
    n1 = [b - a for a, b in zip(c1, c2)]
    n2 = [b - a for a, b in zip(c1, c3)]
    dot = lambda u, v: sum(x * y for x, y in zip(u, v))
    cross = lambda u, v: [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
    h1 = (dot(c2, c2) - dot(c1, c1) - r2 + r1) / 2
    h2 = (dot(c3, c3) - dot(c1, c1) - r3 + r1) / 2
    v = cross(n1, n2)
    vv = dot(v, v)
    if vv < mpmath.mpf(2) ** -150:
        return []
    a, b = cross(n2, v), cross(v, n1)
    x0 = [(h1 * p + h2 * q) / vv for p, q in zip(a, b)]
    w = [x - y for x, y in zip(x0, c1)]
    qa, qb, qc = vv, dot(v, w), dot(w, w) - r1
    disc = qb * qb - qa * qc
    if disc < 0:
        return []
    s = mpmath.sqrt(disc)
    return [[x + t * y for x, y in zip(x0, v)] for t in ((-qb + s) / qa, (-qb - s) / qa)]


# random matrices ----------------------------------------------------------------

def random_loxodromic(rng: random.Random, s: int = 2):
    """Random loxodromic SL2 matrix with entries in Q(i), denominators 2."""
    from gmpy2 import mpq

    from hypdecide.geom import Kind, MatrixSL2, classify, cnum

    def g():
        return cnum(mpq(rng.randint(-s, s), 2), mpq(rng.randint(-s, s), 2))
    while True:
        a, b, c = g(), g(), g()
        if a.is_zero() or c.is_zero():
            continue
        A = MatrixSL2(a, b, c, (1 + b * c) / a)
        if classify(A) is Kind.LOXODROMIC:
            return A


def random_inverse_closed(rng: random.Random, max_size: int = 8):
    """Inverse-closed list of loxodromics satisfying the distinct-sphere
    condition, with 4 to max_size elements."""
    from hypdecide.ford import condition_NE
    while True:
        half = [random_loxodromic(rng) for _ in range(rng.randint(2, max_size // 2))]
        P = half + [A.inv() for A in half]
        if condition_NE(P):
            return P


def vertex_match(exact, approx, tol) -> bool:
    """One-to-one matching of exact vertices against float points."""
    if len(exact) != len(approx):
        return False
    used = set()
    for v in exact:
        p = [mpmath.re(x.to_mpmath(200)) for x in v]
        hits = [k for k, q in enumerate(approx)
                if k not in used and max(abs(a - b) for a, b in zip(p, q)) < tol]
        if len(hits) != 1:
            return False
        used.add(hits[0])
    return True
