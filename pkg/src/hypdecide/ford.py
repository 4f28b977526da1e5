"""The complex K: compact part of the boundary of the region outside all
isometric spheres of a finite set of matrices, and its combinatorial tests."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from flint import arb

from .algnum import AlgebraicNumber, Order
from .algnum.ball import arb_interval, workprec
from .errors import DomainError
from .geom import (BALL_ORIGIN, IsometricSphere, Kind, MatrixSL2, Quaternion, Side, act_ball,
                   classify, dist_sq, isometric_sphere, num, point_vs_sphere)

NUM_BITS = 128


def _r(x: AlgebraicNumber, bits: int = NUM_BITS) -> arb:
    return x.enclose(bits).real


def _sign(a: arb):
    if a > 0:
        return 1
    if a < 0:
        return -1
    return None


def condition_NE(P) -> bool:
    """No elliptics in P and pairwise distinct isometric spheres."""
    spheres = []
    for A in P:
        k = classify(A)
        if k in (Kind.ELLIPTIC, Kind.IDENTITY, Kind.MINUS_IDENTITY):
            return False
        spheres.append(isometric_sphere(A))
    return _distinct(spheres)


def _distinct(spheres) -> bool:
    nums = [_sphere_num(S) for S in spheres]
    for i, j in itertools.combinations(range(len(spheres)), 2):
        (ci, ri), (cj, rj) = nums[i], nums[j]
        if not (ri.overlaps(rj) and all(a.overlaps(b) for a, b in zip(ci, cj))):
            continue
        if spheres[i].same_as(spheres[j]):
            return False
    return True


def _sphere_num(S: IsometricSphere, bits: int = NUM_BITS):
    return tuple(_r(x, bits) for x in S.center), _r(S.radius_sq, bits)


# triple intersections -------------------------------------------------------

def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _line(S1, S2, S3):
    """Common line of the two radical planes, or None if they are parallel.

    Returns (x0, v, qa, qb, qc): points x0 + t v, with the sphere condition
    qa t^2 + 2 qb t + qc = 0.
    """
    c1, c2, c3 = S1.center, S2.center, S3.center
    n1, n2 = _sub(c2, c1), _sub(c3, c1)
    h1 = (_dot(c2, c2) - _dot(c1, c1) - S2.radius_sq + S1.radius_sq) / 2
    h2 = (_dot(c3, c3) - _dot(c1, c1) - S3.radius_sq + S1.radius_sq) / 2
    v = _cross(n1, n2)
    vv = _dot(v, v)
    if vv.is_zero():
        return None
    a, b = _cross(n2, v), _cross(v, n1)
    x0 = tuple((h1 * p + h2 * q) / vv for p, q in zip(a, b))
    w = _sub(x0, c1)
    return x0, v, vv, _dot(v, w), _dot(w, w) - S1.radius_sq


def _points(line):
    x0, v, qa, qb, qc = line
    disc = qb * qb - qa * qc
    if disc.is_zero():
        ts = [-qb / qa]
    elif disc.sign() < 0:
        return []
    else:
        s = disc.sqrt()
        ts = [(-qb + s) / qa, (-qb - s) / qa]
    return [tuple(p + t * q for p, q in zip(x0, v)) for t in ts]


def triple_intersection(S1: IsometricSphere, S2: IsometricSphere, S3: IsometricSphere) -> list:
    """Isolated common points of three spheres, as exact (x, y, z) triples.

    Spheres with collinear centres meet in a circle or not at all; they have
    no isolated common points and give an empty list.
    """
    for A, B in ((S1, S2), (S1, S3), (S2, S3)):
        if A.same_as(B):
            raise DomainError("coincident spheres")
    line = _line(S1, S2, S3)
    if line is None:
        return []
    return _points(line)


def _num_points(line, bits: int = NUM_BITS):
    """Numeric enclosures of the candidate points: list of (sign, triple)."""
    x0, v, qa, qb, qc = line
    x0n, vn = [_r(x, bits) for x in x0], [_r(x, bits) for x in v]
    an, bn, cn = _r(qa, bits), _r(qb, bits), _r(qc, bits)
    with workprec(bits):
        disc = bn * bn - an * cn
        if disc < 0:
            return []
        s = disc.sqrt() if disc > 0 else arb(0, disc.rad()).sqrt()
        out = []
        for sg in (1, -1):
            t = (-bn + sg * s) / an
            out.append((sg, tuple(p + t * q for p, q in zip(x0n, vn))))
        return out


def _num_side(p, c, r2, bits: int = NUM_BITS):
    with workprec(bits):
        d = sum(((a - b) * (a - b) for a, b in zip(p, c)), arb(0)) - r2
    return _sign(d)


# the complex --------------------------------------------------------------

@dataclass
class FordComplex:
    matrices: list
    spheres: list
    vertices: list = field(default_factory=list)      # exact (x, y, z)
    on: list = field(default_factory=list)            # frozenset of sphere indices per vertex
    edges: set = field(default_factory=set)           # frozenset({i, j})
    faces: list = field(default_factory=list)         # (sphere index, [vertex circuit])
    bad_spheres: list = field(default_factory=list)   # spheres whose vertices form no circuit

    def face_of(self, s: int):
        for k, (t, _) in enumerate(self.faces):
            if t == s:
                return k
        return None

    def euler(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)

    def face_edges(self, k: int) -> list:
        c = self.faces[k][1]
        return [frozenset((c[i], c[(i + 1) % len(c)])) for i in range(len(c))]

    def to_json(self, fields: list | None = None) -> dict:
        return {
            "vertices": [[x.to_json(fields) for x in v] for v in self.vertices],
            "on": [sorted(s) for s in self.on],
            "edges": sorted(sorted(e) for e in self.edges),
            "faces": [{"sphere": s, "circuit": list(c)} for s, c in self.faces],
        }

    def to_off(self) -> str:
        lines = ["OFF", f"{len(self.vertices)} {len(self.faces)} {len(self.edges)}"]
        for v in self.vertices:
            lines.append(" ".join(f"{float(x):.17g}" for x in v))
        for _, c in self.faces:
            lines.append(" ".join(str(x) for x in [len(c)] + list(c)))
        return "\n".join(lines) + "\n"


class Arrangement:
    """Isometric spheres added one at a time, with the vertex candidates kept
    current, so that a growing list of matrices costs only the new triples.

    A sphere lying strictly inside another one's ball can carry no vertex of
    K; such buried spheres are set aside and take no part in triples.
    """

    def __init__(self):
        self.matrices = []
        self.spheres = []
        self.nums = []
        self.visible = []
        self.verts = []      # [exact point, numeric point, set of spheres through it]
        self._meet = {}
        self.version = 0
        self._K = None

    def __len__(self):
        return len(self.spheres)

    def add(self, A: MatrixSL2) -> int:
        S = isometric_sphere(A)
        new = len(self.spheres)
        self.matrices.append(A)
        self.spheres.append(S)
        c, r2 = _sphere_num(S)
        with workprec(NUM_BITS):
            self.nums.append((c, r2, r2.sqrt()))
        self._K = None
        self.version += 1
        for v in list(self.visible):
            rel = self._nesting(new, v)
            if rel == -1:
                return new
            if rel == 1:
                self.visible.remove(v)
        # existing vertices: drop those now strictly inside, note those on it
        keep = []
        for p, pn, on in self.verts:
            sd = _num_side(pn, c, r2)
            if sd is None:
                side = point_vs_sphere(p, S)
                if side is Side.INSIDE:
                    continue
                if side is Side.ON:
                    on.add(new)
            elif sd < 0:
                continue
            keep.append([p, pn, on])
        self.verts = keep
        near = [v for v in self.visible if self._may_meet(v, new)]
        self.visible.append(new)
        for i, j in itertools.combinations(near, 2):
            if not self._may_meet(i, j):
                continue
            self._triple(i, j, new)
        return new

    def _nesting(self, a: int, b: int):
        """-1 if sphere a lies strictly inside sphere b's ball, 1 for the
        reverse, None otherwise (or when the numerics cannot tell)."""
        (ca, _, ra), (cb, _, rb) = self.nums[a], self.nums[b]
        with workprec(NUM_BITS):
            d = sum(((x - y) * (x - y) for x, y in zip(ca, cb)), arb(0)).sqrt()
            if rb - ra - d > 0:
                return -1
            if ra - rb - d > 0:
                return 1
        return None

    def _may_meet(self, a: int, b: int) -> bool:
        key = (min(a, b), max(a, b))
        hit = self._meet.get(key)
        if hit is None:
            (ca, _, ra), (cb, _, rb) = self.nums[a], self.nums[b]
            with workprec(NUM_BITS):
                d2 = sum(((x - y) * (x - y) for x, y in zip(ca, cb)), arb(0))
                s = ra + rb
                hit = not (d2 - s * s > 0)
            self._meet[key] = hit
        return hit

    def _triple(self, i, j, k):
        line = _line(self.spheres[i], self.spheres[j], self.spheres[k])
        if line is None:
            return
        vis = [self.spheres[v] for v in self.visible]
        nums = [self.nums[v][:2] for v in self.visible]
        origin = (arb(0), arb(0), arb(0))
        cands = []
        for sg, pn in _num_points(line):
            if _num_side(pn, origin, arb(1)) == 1:
                continue
            if any(_num_side(pn, cc, rr) == -1 for cc, rr in nums):
                continue
            cands.append(sg)
        if not cands:
            return
        pts = _points(line)
        if len(pts) == 2:
            pts = [pts[0] if sg == 1 else pts[1] for sg in cands]
        for p in pts:
            if not _admissible(p, vis, nums):
                continue
            pn = tuple(_r(x) for x in p)
            dup = None
            for rec in self.verts:
                if all(a.overlaps(b) for a, b in zip(pn, rec[1])) and _same_point(p, rec[0]):
                    dup = rec
                    break
            if dup is not None:
                continue
            on = {s for s in self.visible if s in (i, j, k)
                  or _on(pn, p, self.spheres[s], self.nums[s][:2])}
            self.verts.append([p, pn, on])

    def complex(self) -> FordComplex:
        if self._K is not None:
            return self._K
        n = len(self.spheres)
        recs = sorted(self.verts, key=lambda r: _sort_key(r[0]))
        K = FordComplex(list(self.matrices), list(self.spheres))
        K.vertices = [r[0] for r in recs]
        K.on = [frozenset(r[2]) for r in recs]
        for a, b in itertools.combinations(range(len(K.vertices)), 2):
            if len(K.on[a] & K.on[b]) >= 2:
                K.edges.add(frozenset((a, b)))
        for s in range(n):
            vs = [a for a in range(len(K.vertices)) if s in K.on[a]]
            if not vs:
                continue
            circuit = _circuit(vs, [e for e in K.edges if e <= set(vs) and s in _common(K, e)])
            if circuit is None:
                K.bad_spheres.append(s)
            else:
                K.faces.append((s, circuit))
        self._K = K
        return K


def build_complex(P) -> FordComplex:
    arr = Arrangement()
    for A in P:
        arr.add(A)
    return arr.complex()


def _common(K, e):
    a, b = tuple(e)
    return K.on[a] & K.on[b]


def _sort_key(p):
    return tuple(arb_interval(x.enclose(200).real).mid for x in p)


def _same_point(p, q) -> bool:
    return all(a.equals(b) for a, b in zip(p, q))


def _on(pn, p, S, Sn) -> bool:
    sd = _num_side(pn, Sn[0], Sn[1])
    if sd is not None:
        return False
    return point_vs_sphere(p, S) is Side.ON


def _admissible(p, spheres, nums) -> bool:
    """Strictly inside the unit ball, and outside or on every sphere."""
    pn = tuple(_r(x) for x in p)
    sb = _num_side(pn, (arb(0),) * 3, arb(1))
    if sb == 1:
        return False
    if sb is None and dist_sq(p, (0, 0, 0)).compare_real(1) is not Order.LESS:
        return False
    for S, (c, r2) in zip(spheres, nums):
        sd = _num_side(pn, c, r2)
        if sd == -1:
            return False
        if sd is None and point_vs_sphere(p, S) is Side.INSIDE:
            return False
    return True


def _circuit(vs, edges):
    """Order vs as one simple cycle using the given edges, or None."""
    if len(vs) < 3:
        return None
    adj = {v: [] for v in vs}
    for e in edges:
        a, b = tuple(e)
        adj[a].append(b)
        adj[b].append(a)
    if any(len(x) != 2 for x in adj.values()):
        return None
    start = min(vs)
    cyc, prev, cur = [start], None, start
    while True:
        a, b = sorted(adj[cur])
        nxt = a if a != prev else b
        if nxt == start:
            break
        cyc.append(nxt)
        prev, cur = cur, nxt
    return cyc if len(cyc) == len(vs) else None


def is_two_sphere(K: FordComplex) -> bool:
    if not K.vertices or not K.faces:
        return False
    # connectivity through edges
    adj = {v: set() for v in range(len(K.vertices))}
    for e in K.edges:
        a, b = tuple(e)
        adj[a].add(b)
        adj[b].add(a)
    seen, todo = {0}, [0]
    while todo:
        v = todo.pop()
        for w in adj[v] - seen:
            seen.add(w)
            todo.append(w)
    if len(seen) != len(K.vertices):
        return False
    if K.euler() != 2:
        return False
    count = {e: 0 for e in K.edges}
    for k in range(len(K.faces)):
        for e in K.face_edges(k):
            if e not in count:
                return False
            count[e] += 1
    return all(c == 2 for c in count.values())


@dataclass
class Pairing:
    faces: dict        # face index -> face index
    vertex_maps: dict  # face index -> {vertex -> vertex}


def _find_vertex(K, p) -> int | None:
    pn = tuple(_r(x) for x in p)
    for i, q in enumerate(K.vertices):
        qn = tuple(_r(x) for x in q)
        if all(a.overlaps(b) for a, b in zip(pn, qn)) and _same_point(p, q):
            return i
    return None


def _inverse_index(P, s) -> int | None:
    Ainv = P[s].inv()
    for t, B in enumerate(P):
        if B.same_mobius(Ainv):
            return t
    return None


def check_face_pairings(K: FordComplex, P=None) -> Pairing | None:
    """A(F_A) = F_{A^-1} for every face, compared vertex by vertex."""
    P = K.matrices if P is None else list(P)
    faces, vmaps = {}, {}
    for k, (s, circ) in enumerate(K.faces):
        t = _inverse_index(P, s)
        if t is None:
            return None
        kk = K.face_of(t)
        if kk is None:
            return None
        A = P[s]
        vm = {}
        for v in circ:
            img = act_ball(A, Quaternion.point(*K.vertices[v]))
            w = _find_vertex(K, img.coords())
            if w is None:
                return None
            vm[v] = w
        if set(vm.values()) != set(K.faces[kk][1]) or len(set(vm.values())) != len(circ):
            return None
        faces[k], vmaps[k] = kk, vm
    return Pairing(faces, vmaps)
