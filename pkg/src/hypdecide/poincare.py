"""Poincare polyhedron checks on the complex K, the group generated by the
face pairings, faithfulness, the accept loop, and certificates."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from flint import arb
from gmpy2 import mpq

from .algnum import AlgebraicNumber, Interval, Order, field_from_json, field_to_json
from .algnum.ball import arb_interval, workprec
from .errors import DomainError
from .ford import Arrangement, FordComplex, build_complex, check_face_pairings, is_two_sphere
from .geom import (BALL_ORIGIN, IsometricSphere, Kind, MatrixSL2, Side, act_ball, classify,
                   dist_sq, isometric_sphere, point_vs_sphere)
from .repfind import Presentation, Representation
from .wordproblem import (WordEnumerator, format_word, free_reduce, inverse, oracle_from_spec,
                          parse_word)

DEFAULT_EPS = mpq(1, 2 ** 20)


# edge cycles ------------------------------------------------------------------

@dataclass
class EdgeCycle:
    edges: list            # e_1 .. e_{k-1}, each a frozenset of two vertex indices
    faces: list            # F_{A_i}: the face whose pairing carries e_i to e_{i+1}
    sign: int | None = None

    def spheres(self, K: FordComplex) -> list:
        return [K.faces[f][0] for f in self.faces]

    def to_json(self) -> dict:
        return {"edges": [sorted(e) for e in self.edges], "faces": list(self.faces), "sign": self.sign}


def _edge_faces(K: FordComplex) -> dict:
    out = {e: [] for e in K.edges}
    for k in range(len(K.faces)):
        for e in K.face_edges(k):
            if e not in out:
                raise DomainError("face boundary uses a non-edge")
            out[e].append(k)
    for e, fs in out.items():
        if len(fs) != 2:
            raise DomainError(f"edge {sorted(e)} bounds {len(fs)} faces, not 2")
    return out


def edge_cycles(K: FordComplex, pairing) -> list:
    """Partition the edges of K into cycles: e_{i+1} = A_i(e_i), where F_{A_i}
    is the face next to e_i other than the one e_i was mapped into.  A cycle
    closes at the first return to its starting (edge, face) pair."""
    ef = _edge_faces(K)
    done = set()
    out = []
    for e1 in sorted(K.edges, key=sorted):
        if e1 in done:
            continue
        f1 = min(ef[e1])
        e, f = e1, f1
        edges, faces = [], []
        while True:
            edges.append(e)
            faces.append(f)
            done.add(e)
            vm = pairing.vertex_maps[f]
            e2 = frozenset(vm[v] for v in e)
            into = pairing.faces[f]
            if e2 not in ef or into not in ef[e2]:
                raise DomainError("face pairing does not carry the edge to an edge of the paired face")
            a, b = ef[e2]
            f2 = b if a == into else a
            e, f = e2, f2
            if (e, f) == (e1, f1):
                break
            if len(edges) > 4 * len(K.edges):
                raise DomainError("edge cycle does not close")
        out.append(EdgeCycle(edges, faces))
    return out


def cycle_product(c: EdgeCycle, K: FordComplex) -> MatrixSL2:
    """A_{k-1} ... A_1."""
    M = MatrixSL2.identity()
    for s in c.spheres(K):
        M = K.matrices[s] * M
    return M


def check_cycle_identity(c: EdgeCycle, K: FordComplex) -> bool:
    """Product is I or -I (the same isometry); the sign is kept on the cycle."""
    M = cycle_product(c, K)
    if M.is_identity():
        c.sign = 1
    elif M.is_minus_identity():
        c.sign = -1
    else:
        c.sign = None
        return False
    return True


# dihedral angles ----------------------------------------------------------------

def _angle_parts(S1: IsometricSphere, S2: IsometricSphere):
    num = dist_sq(S1.center, S2.center) - S1.radius_sq - S2.radius_sq
    den_sq = S1.radius_sq * S2.radius_sq * 4
    return num, den_sq


def cosine_argument(S1: IsometricSphere, S2: IsometricSphere) -> AlgebraicNumber:
    """(|c1 - c2|^2 - r1^2 - r2^2) / (2 r1 r2), exactly."""
    num, den_sq = _angle_parts(S1, S2)
    return num / den_sq.sqrt()


def dihedral_angle_bounds(S1: IsometricSphere, S2: IsometricSphere, eps=DEFAULT_EPS) -> Interval:
    """Rational interval of width < eps around the angle between the two
    spheres, measured in the region outside both."""
    eps = mpq(eps)
    num, den_sq = _angle_parts(S1, S2)
    if (num * num).compare_real(den_sq) is not Order.LESS:
        raise DomainError("spheres are tangent or disjoint")
    bits = 64
    while True:
        with workprec(bits + 20):
            x = num.enclose(bits).real / den_sq.enclose(bits).real.sqrt()
            a = x.acos()
        iv = arb_interval(a)
        if iv.hi - iv.lo < eps:
            return iv
        bits *= 2
        if bits > 1 << 16:
            raise DomainError("angle enclosure does not tighten")


def _pi_bounds(bits: int = 128) -> Interval:
    with workprec(bits):
        return arb_interval(arb.pi())


def angle_sum_ok(total: Interval) -> bool:
    """total lies strictly between 3pi/2 and 5pi/2, which with an exact
    identity product pins the angle sum to 2pi."""
    pi = _pi_bounds()
    return total.lo > pi.hi * 3 / 2 and total.hi < pi.lo * 5 / 2


def edge_angle(K: FordComplex, e, ef: dict, eps=DEFAULT_EPS) -> Interval:
    a, b = ef[e]
    return dihedral_angle_bounds(K.spheres[K.faces[a][0]], K.spheres[K.faces[b][0]], eps)


def cycle_angle_sum(c: EdgeCycle, K: FordComplex, eps=DEFAULT_EPS, ef=None) -> Interval:
    ef = ef or _edge_faces(K)
    total = Interval(mpq(0), mpq(0))
    for e in c.edges:
        total = total + edge_angle(K, e, ef, eps)
    return total


def check_angle_sums(cycles, K: FordComplex, eps=DEFAULT_EPS, min_eps=mpq(1, 2 ** 80)):
    """(ok, per-cycle intervals).  A sum that is not decided at the current
    width is retried with narrower edge intervals down to min_eps."""
    ef = _edge_faces(K)
    pi = _pi_bounds()
    sums = []
    for c in cycles:
        e = mpq(eps)
        while True:
            total = cycle_angle_sum(c, K, e, ef)
            if angle_sum_ok(total):
                sums.append(total)
                break
            # clearly outside: no refinement can help
            if total.hi < pi.hi * 3 / 2 or total.lo > pi.lo * 5 / 2 or e < min_eps:
                sums.append(total)
                return False, sums
            e /= 1024
    return True, sums


def check_angle_list(angles) -> bool:
    """Angle-sum test on a bare list of edge intervals."""
    total = Interval(mpq(0), mpq(0))
    for a in angles:
        total = total + a
    return angle_sum_ok(total)


# membership in the group generated by the face pairings ----------------------

@dataclass
class Membership:
    status: str             # member | non_member | timeout
    word: tuple | None = None
    explored: int = 0


def in_domain(q, spheres) -> bool:
    return all(point_vs_sphere(q, S) is not Side.INSIDE for S in spheres)


def membership_search(target: MatrixSL2, gens, budget: int = 100000, spheres=None) -> Membership:
    """Breadth-first search over words w in the generators for one with
    w^-1 target (0) in the region outside all their isometric spheres; then
    w^-1 target = I decides membership.  Needs 0 in the interior of that
    region and a torsion-free group."""
    gens = list(gens)
    if spheres is None:
        spheres = []
        for T in gens:
            spheres.append(isometric_sphere(T))
            spheres.append(isometric_sphere(T.inv()))
    letters = []
    for i in range(1, len(gens) + 1):
        letters += [i, -i]
    inv_mats = {i: gens[i - 1].inv() for i in range(1, len(gens) + 1)}
    inv_mats.update({-i: gens[i - 1] for i in range(1, len(gens) + 1)})
    frontier = [((), target)]
    explored = 0
    while frontier:
        nxt = []
        for w, M in frontier:
            explored += 1
            if explored > budget:
                return Membership("timeout", None, explored - 1)
            if M.is_identity():
                return Membership("member", w, explored)
            q = act_ball(M, BALL_ORIGIN)
            if in_domain(q, spheres):
                return Membership("non_member", w, explored)
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append((w + (x,), inv_mats[x] * M))
        frontier = nxt
    return Membership("timeout", None, explored)


def word_matrix(word, gens) -> MatrixSL2:
    M = MatrixSL2.identity()
    for x in word:
        M = M * (gens[x - 1] if x > 0 else gens[-x - 1].inv())
    return M


@dataclass
class GammaCheck:
    status: str               # equal | proper | timeout
    words: dict = field(default_factory=dict)   # generator index -> word over face generators
    failed: int | None = None


def face_generators(K: FordComplex) -> list:
    """Sphere indices of face owners, in face order."""
    return [s for s, _ in K.faces]


def check_gamma_equals_image(rep: Representation, K: FordComplex, pairing=None,
                             budget: int = 100000) -> GammaCheck:
    owners = face_generators(K)
    gens = [K.matrices[s] for s in owners]
    spheres = [K.spheres[s] for s in owners]
    out = GammaCheck("equal")
    for i, A in enumerate(rep.images, 1):
        m = membership_search(A, gens, budget, spheres)
        if m.status != "member":
            out.status = "timeout" if m.status == "timeout" else "proper"
            out.failed = i
            return out
        out.words[i] = m.word
    return out


# faithfulness -------------------------------------------------------------------

@dataclass
class Faithfulness:
    ok: bool
    kernel_word: tuple | None = None
    failed_relator: tuple | None = None
    reason: str = ""


def _phi(word, face_words):
    """Image under phi of a word over face generators (1-based, signed)."""
    out = []
    for x in word:
        w = face_words[abs(x) - 1]
        out += list(w if x > 0 else inverse(w))
    return free_reduce(out)


def check_faithful(rep: Representation, K: FordComplex, pairing, cycles, face_words,
                   gamma_words: dict, oracle) -> Faithfulness:
    """phi sends the face generator T_s to face_words[s]; check that phi
    respects the cycle and inverse-pair relations, and that phi(rho(g)) = g."""
    index = {f: f + 1 for f in range(len(K.faces))}
    # edge-cycle relators: A_{k-1} ... A_1
    for c in cycles:
        rel = tuple(index[f] for f in reversed(c.faces))
        w = _phi(rel, face_words)
        if not oracle.is_trivial(w):
            return Faithfulness(False, failed_relator=w, reason="cycle relator is nontrivial")
    for f, g in pairing.faces.items():
        w = _phi((index[f], index[g]), face_words)
        if not oracle.is_trivial(w):
            return Faithfulness(False, failed_relator=w, reason="paired faces are not inverse")
    for i, u in gamma_words.items():
        w = free_reduce(list(_phi(u, face_words)) + [-i])
        if not oracle.is_trivial(w):
            # rho(w) = I, yet w is not trivial: rho has a kernel
            return Faithfulness(False, kernel_word=w, reason="rho has a kernel")
    return Faithfulness(True)


# certificates ----------------------------------------------------------------------

FORMAT = "hypdecide-certificate/1"


@dataclass
class Certificate:
    presentation: Presentation
    rep: Representation
    oracle_spec: dict
    face_words: list            # per face, a word in the presentation generators
    complex: FordComplex
    pairing: object
    cycles: list
    angle_sums: list
    gamma_words: dict
    eps: mpq = DEFAULT_EPS

    def to_json(self) -> dict:
        fields = []
        gens = self.presentation.gens
        body = {
            "format": FORMAT,
            "presentation": self.presentation.to_json(),
            "representation": self.rep.to_json(fields),
            "oracle": self.oracle_spec,
            "face_words": [format_word(w, gens) for w in self.face_words],
            "complex": self.complex.to_json(fields),
            "pairing": [[f, g] for f, g in sorted(self.pairing.faces.items())],
            "cycles": [dict(c.to_json(), angle_sum=[str(t.lo), str(t.hi)])
                       for c, t in zip(self.cycles, self.angle_sums)],
            "gamma_words": {gens[i - 1]: list(w) for i, w in sorted(self.gamma_words.items())},
            "angle_eps": str(self.eps),
        }
        body["fields"] = [field_to_json(F) for F in fields]
        return body

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1) + "\n"

    @classmethod
    def loads(cls, text: str) -> "Certificate":
        return cls.from_json(json.loads(text))

    @classmethod
    def from_json(cls, d: dict) -> "Certificate":
        if d.get("format") != FORMAT:
            raise ValueError("not a certificate")
        fields = [field_from_json(f) for f in d["fields"]]
        pres = Presentation.from_json(d["presentation"])
        rep = Representation.from_json(d["representation"], fields)
        face_words = [parse_word(w, pres.gens) for w in d["face_words"]]
        P = [rep.image(w) for w in face_words]
        K = FordComplex(P, [isometric_sphere(A) for A in P])
        cd = d["complex"]
        K.vertices = [tuple(AlgebraicNumber.from_json(x, fields) for x in v) for v in cd["vertices"]]
        K.on = [frozenset(s) for s in cd["on"]]
        K.edges = {frozenset(e) for e in cd["edges"]}
        K.faces = [(f["sphere"], list(f["circuit"])) for f in cd["faces"]]
        pairing = _StoredPairing({f: g for f, g in d["pairing"]})
        cycles, sums = [], []
        for c in d["cycles"]:
            cycles.append(EdgeCycle([frozenset(e) for e in c["edges"]], list(c["faces"]), c["sign"]))
            sums.append(Interval(mpq(c["angle_sum"][0]), mpq(c["angle_sum"][1])))
        gw = {pres.gens.index(g) + 1: tuple(w) for g, w in d["gamma_words"].items()}
        return cls(pres, rep, d["oracle"], face_words, K, pairing, cycles, sums, gw, mpq(d["angle_eps"]))

    def verify(self, oracle=None) -> "Verification":
        """Recompute every check from the presentation, representation and
        face words alone, and compare with the stored data."""
        pres, rep = self.presentation, self.rep
        if not rep.satisfies(pres):
            return Verification(False, "representation does not satisfy the relators")
        P = [rep.image(w) for w in self.face_words]
        if any(classify(A) in (Kind.ELLIPTIC, Kind.IDENTITY, Kind.MINUS_IDENTITY) for A in P):
            return Verification(False, "a face word is elliptic or trivial")
        K = build_complex(P)
        if len(K.vertices) != len(self.complex.vertices) or not all(
                all(a.equals(b) for a, b in zip(p, q)) for p, q in zip(K.vertices, self.complex.vertices)):
            return Verification(False, "vertices differ")
        if K.edges != self.complex.edges or K.faces != self.complex.faces:
            return Verification(False, "edges or faces differ")
        if [s for s, _ in K.faces] != list(range(len(P))):
            return Verification(False, "face words do not match the faces")
        if not is_two_sphere(K):
            return Verification(False, "K is not a 2-sphere")
        pairing = check_face_pairings(K)
        if pairing is None or pairing.faces != self.pairing.faces:
            return Verification(False, "face pairing fails")
        cycles = edge_cycles(K, pairing)
        if [(c.edges, c.faces) for c in cycles] != [(c.edges, c.faces) for c in self.cycles]:
            return Verification(False, "edge cycles differ")
        for c, stored in zip(cycles, self.cycles):
            if not check_cycle_identity(c, K) or c.sign != stored.sign:
                return Verification(False, "cycle product is not +-I")
        ok, _ = check_angle_sums(cycles, K, self.eps)
        if not ok:
            return Verification(False, "angle sum is not 2pi")
        gens_T = [K.matrices[s] for s, _ in K.faces]
        for i, A in enumerate(rep.images, 1):
            u = self.gamma_words.get(i)
            if u is None or not (word_matrix(u, gens_T) == A):
                return Verification(False, f"generator {pres.gens[i - 1]} is not reached by its word")
        oracle = oracle or oracle_from_spec(self.oracle_spec, pres.gens)
        fa = check_faithful(rep, K, pairing, cycles, self.face_words, self.gamma_words, oracle)
        if not fa.ok:
            return Verification(False, fa.reason)
        return Verification(True, "ok")


@dataclass
class _StoredPairing:
    faces: dict


@dataclass
class Verification:
    ok: bool
    message: str

    def __bool__(self):
        return self.ok


# the accept loop ------------------------------------------------------------------

@dataclass
class AcceptConfig:
    eps: mpq = DEFAULT_EPS
    membership_budget: int = 20000


@dataclass
class AcceptState:
    rep: Representation
    presentation: Presentation
    config: AcceptConfig = field(default_factory=AcceptConfig)
    enum: WordEnumerator | None = None
    words: list = field(default_factory=list)
    mats: dict = field(default_factory=dict)
    arr: Arrangement = field(default_factory=Arrangement)
    P_words: list = field(default_factory=list)     # word behind each sphere
    _mobius: dict = field(default_factory=dict)
    _spheres: dict = field(default_factory=dict)
    ne_ok: bool = True
    status: str = "start"
    steps: int = 0
    checked_version: int = -1
    certificate: Certificate | None = None

    def __post_init__(self):
        if self.enum is None:
            self.enum = WordEnumerator(len(self.rep.images))
        self.mats[()] = MatrixSL2.identity()

    @property
    def accepted(self) -> bool:
        return self.certificate is not None

    @property
    def outcome(self) -> str:
        """"accepted", or "continue" with the failing stage in ``status``."""
        return "accepted" if self.accepted else "continue"

    def matrix(self, w) -> MatrixSL2:
        M = self.mats.get(w)
        if M is None:
            x = w[-1]
            G = self.rep.images[x - 1] if x > 0 else self.rep.images[-x - 1].inv()
            M = self.matrix(w[:-1]) * G
            self.mats[w] = M
        return M

    def _add(self, w, M):
        k = classify(M)
        if k in (Kind.IDENTITY, Kind.MINUS_IDENTITY):
            return
        if k is Kind.ELLIPTIC:
            self.ne_ok = False
            return
        # skip repeats of the same Moebius map
        for h in (hash(M), hash(-M)):
            if any(self.arr.matrices[i].same_mobius(M) for i in self._mobius.get(h, ())):
                return
        S = isometric_sphere(M)
        hs = hash((S.center, S.radius_sq))
        if any(self.arr.spheres[i].same_as(S) for i in self._spheres.get(hs, ())):
            self.ne_ok = False
            return
        i = self.arr.add(M)
        self.P_words.append(w)
        self._mobius.setdefault(hash(M), []).append(i)
        self._spheres.setdefault(hs, []).append(i)


def accept_step(state: AcceptState, oracle, batch: int = 16) -> AcceptState:
    if state.accepted:
        return state
    state.steps += 1
    for w in state.enum.take(batch):
        state.words.append(w)
        state._add(w, state.matrix(w))
    if not state.ne_ok:
        state.status = "condition_NE_fails"
        return state
    if state.arr.version == state.checked_version:
        return state
    state.checked_version = state.arr.version
    state.status = _try_certify(state, oracle)
    return state


def _try_certify(state: AcceptState, oracle) -> str:
    K = state.arr.complex()
    if not is_two_sphere(K):
        return "K_not_a_sphere"
    pairing = check_face_pairings(K)
    if pairing is None:
        return "faces_not_paired"
    try:
        cycles = edge_cycles(K, pairing)
    except DomainError:
        return "edge_cycles_malformed"
    if not all(check_cycle_identity(c, K) for c in cycles):
        return "cycle_product_not_identity"
    ok, sums = check_angle_sums(cycles, K, state.config.eps)
    if not ok:
        return "angle_sum_not_2pi"
    # restate everything over the face generators alone, which is what the
    # certificate records
    owners = face_generators(K)
    face_words = [state.P_words[s] for s in owners]
    P = [state.arr.matrices[s] for s in owners]
    K2 = build_complex(P)
    pairing2 = check_face_pairings(K2)
    if pairing2 is None or not is_two_sphere(K2):
        return "face_subcomplex_differs"
    cycles2 = edge_cycles(K2, pairing2)
    if not all(check_cycle_identity(c, K2) for c in cycles2):
        return "cycle_product_not_identity"
    ok, sums2 = check_angle_sums(cycles2, K2, state.config.eps)
    if not ok:
        return "angle_sum_not_2pi"
    gamma = check_gamma_equals_image(state.rep, K2, pairing2, state.config.membership_budget)
    if gamma.status == "timeout":
        return "membership_timeout"
    if gamma.status != "equal":
        return "gamma_proper_subgroup"
    fa = check_faithful(state.rep, K2, pairing2, cycles2, face_words, gamma.words, oracle)
    if not fa.ok:
        return "not_faithful"
    cert = Certificate(state.presentation, state.rep, oracle.spec(), face_words, K2, pairing2,
                       cycles2, sums2, gamma.words, state.config.eps)
    v = Certificate.loads(cert.dumps()).verify(oracle)
    if not v.ok:
        return "certificate_does_not_verify"
    state.certificate = cert
    return "accepted"
