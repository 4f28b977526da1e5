"""Build the Seifert-Weber dodecahedral space fixture.

The regular hyperbolic dodecahedron with dihedral angle 2pi/5, centred at the
ball origin, with each face glued to the opposite face after a 3/10 twist.
The face pairings are computed numerically, every matrix entry is recognised
as an element of one degree-8 number field with PSLQ, and the exact matrices
are then checked (determinant, and every edge-cycle product equal to I)
before anything is written.

Usage: python scripts/build_seifert_weber.py [output.json]
"""
import itertools
import json
import sys
from pathlib import Path

import mpmath as mp

from hypdecide.algnum import AlgebraicNumber, RationalPoly, Rectangle, field_to_json
from hypdecide.algnum.roots import rootset
from hypdecide.geom import MatrixSL2

mp.mp.dps = 200
EPS = mp.mpf(10) ** -150

phi = (1 + mp.sqrt(5)) / 2


def face_normals():
    out = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            out += [(0, s1, s2 * phi), (s1, s2 * phi, 0), (s2 * phi, 0, s1)]
    n = mp.sqrt(1 + phi ** 2)
    return [tuple(mp.mpf(x) / n for x in v) for v in out]


def qmul(p, q):
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2, a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2, a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2)


def qinv(q):
    n = sum(x * x for x in q)
    return (q[0] / n, -q[1] / n, -q[2] / n, -q[3] / n)


def qadd(p, q):
    return tuple(x + y for x, y in zip(p, q))


def cq(z):
    return (mp.re(z), mp.im(z), 0, 0)


J = (0, 0, 1, 0)


def act_half(A, q):
    a, b, c, d = A[0, 0], A[0, 1], A[1, 0], A[1, 1]
    return qmul(qadd(qmul(cq(a), q), cq(b)), qinv(qadd(qmul(cq(c), q), cq(d))))


def to_ball(w):
    return qmul(qmul(qadd(w, (0, 0, -1, 0)), qinv(qadd(w, J))), J)


def to_half(p):
    u = qmul(p, (0, 0, -1, 0))
    return qmul(qinv(qadd((1, 0, 0, 0), tuple(-x for x in u))), qmul(qadd((1, 0, 0, 0), u), J))


def act_ball(A, v):
    return to_ball(act_half(A, to_half((v[0], v[1], v[2], 0))))[:3]


def rotation_to(u):
    # SU(2) element taking the boundary point +j of the ball to u
    x, y, t = u
    z = mp.mpc(x, y) / (1 - t)
    b = 1 / mp.sqrt(1 + abs(z) ** 2)
    a = -z * b
    return mp.matrix([[a, b], [-mp.conj(b), mp.conj(a)]])


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def main(out_path):
    normals = face_normals()
    rho = mp.acosh(mp.sqrt((5 + 2 * mp.sqrt(5)) / 4))  # inradius for dihedral angle 2pi/5
    twist = 3 * mp.pi / 5
    mats = []
    for u in normals:
        C = rotation_to(u)
        lam = mp.exp(-rho + 1j * twist / 2)
        mats.append(-(C * mp.diag([lam, 1 / lam]) * C ** -1))

    # vertices: directions of a Euclidean dodecahedron, scaled onto the faces
    dirs = [tuple(map(mp.mpf, s)) for s in itertools.product((1, -1), repeat=3)]
    for s1 in (1, -1):
        for s2 in (1, -1):
            dirs += [(0, s1 * phi, s2 / phi), (s1 / phi, 0, s2 * phi), (s1 * phi, s2 / phi, 0)]
    dirs = [tuple(x / mp.sqrt(3) for x in v) for v in dirs]
    coth = mp.cosh(rho) / mp.sinh(rho)
    w = max(dirs, key=lambda v: dot(v, normals[0]))
    h = dot(w, normals[0]) * coth
    mu = h - mp.sqrt(h * h - 1)
    verts = [tuple(mu * x for x in v) for v in dirs]

    def vidx(p):
        for i, v in enumerate(verts):
            if sum((a - b) ** 2 for a, b in zip(p, v)) < EPS:
                return i
        raise ValueError("image is not a vertex")

    faces = []
    for u in normals:
        m = max(dot(v, u) for v in verts)
        faces.append(frozenset(i for i, v in enumerate(verts) if dot(v, u) > m - EPS))
    opposite = [next(j for j, w in enumerate(normals) if all(abs(a + b) < EPS for a, b in zip(u, w)))
                for u in normals]
    edges = [frozenset(e) for e in itertools.combinations(range(20), 2)
             if sum(1 for F in faces if set(e) <= F) == 2]
    assert len(edges) == 30

    # A_k maps face k onto the opposite face
    for k in range(12):
        img = frozenset(vidx(act_ball(mats[k], verts[i])) for i in faces[k])
        assert img == faces[opposite[k]], "face pairing does not match vertices"

    seen, cycles = set(), []
    for e1 in edges:
        if e1 in seen:
            continue
        k = next(j for j, F in enumerate(faces) if e1 <= F)
        e, seq = e1, []
        while True:
            seen.add(e)
            seq.append(k)
            e = frozenset(vidx(act_ball(mats[k], verts[i])) for i in e)
            k = next(j for j, F in enumerate(faces) if e <= F and j != opposite[k])
            if e == e1:
                break
        cycles.append(seq)
    assert sorted(map(len, cycles)) == [5] * 6

    # generators: one face of each opposite pair
    gens = [k for k in range(12) if k < opposite[k]]
    names = "abcdef"
    letter = {}
    for n, k in zip(names, gens):
        letter[k] = n
        letter[opposite[k]] = n.upper()

    theta = -mats[gens[0]][0, 0]
    poly = RationalPoly([29, -252, 980, -2384, 4240, -5056, 3648, -1280, 256])
    rs = rootset(poly)
    tiny = mp.mpf(2) ** -100
    box = Rectangle(*(mp_to_q(x) for x in (mp.re(theta) - tiny, mp.re(theta) + tiny,
                                          mp.im(theta) - tiny, mp.im(theta) + tiny)))
    index = rs.find_index(box)

    powers = [theta ** k for k in range(8)]

    def coords(z):
        vec = [mp.re(z) + mp.e * mp.im(z)] + [mp.re(p) + mp.e * mp.im(p) for p in powers]
        rel = mp.pslq(vec, maxcoeff=10 ** 40, maxsteps=10 ** 6)
        if not rel or rel[0] == 0:
            raise RuntimeError("entry not recognised in Q(theta)")
        from fractions import Fraction
        return [str(Fraction(-c, rel[0])) for c in rel[1:]]

    exact = {}
    for k in range(12):
        entries = [coords(mats[k][r, c]) for r in range(2) for c in range(2)]
        exact[k] = MatrixSL2(*(AlgebraicNumber.in_field(poly, index, c) for c in entries))
        for (r, c), x in zip(itertools.product(range(2), range(2)), exact[k].entries):
            assert abs(x.to_mpmath(600) - mats[k][r, c]) < mp.mpf(10) ** -100
    for k in range(12):
        assert (exact[k] * exact[opposite[k]]).is_identity()

    relators = []
    for seq in cycles:
        P = MatrixSL2.identity()
        for k in seq:
            P = exact[k] * P
        assert P.is_identity(), "edge cycle product is not I"
        relators.append(" ".join(letter[k] for k in reversed(seq)))

    F = exact[gens[0]].a.field
    doc = {
        "name": "Seifert-Weber dodecahedral space",
        "field": field_to_json(F),
        "gens": list(names),
        "relators": relators,
        "matrices": {n: [[str(q) for q in _coords(x)] for x in exact[k].entries]
                     for n, k in zip(names, gens)},
    }
    Path(out_path).write_text(json.dumps(doc, indent=1) + "\n")
    print("wrote", out_path, "relators:", relators)


def _coords(x):
    from hypdecide.algnum.ball import fmpq_to_q
    cs = [fmpq_to_q(c) for c in x.elem.coeffs()]
    return cs + [0] * (8 - len(cs))


def mp_to_q(x):
    from gmpy2 import mpq
    x = mp.mpf(x)
    m, e = x.man_exp
    m = -int(m) if x < 0 else int(m)
    return mpq(int(m) * 2 ** e) if e >= 0 else mpq(int(m), 2 ** -e)


if __name__ == "__main__":
    default = Path(__file__).resolve().parents[1] / "src" / "hypdecide" / "data" / "seifert_weber.json"
    main(sys.argv[1] if len(sys.argv) > 1 else default)
