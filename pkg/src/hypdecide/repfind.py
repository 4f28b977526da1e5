"""Presentations, the SL2 representation variety, and rigid candidates.

Variable z_{k,i} (k = 1..4, generator i) is the k-th entry of the image of
generator i, read row by row: [[z1, z2], [z3, z4]].  It has index
4*(i-1) + (k-1) in the polynomial ring.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import polysys as ps
from .errors import DomainError
from .geom import MatrixSL2
from .wordproblem import free_reduce, format_word, inverse_name, parse_word


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        self.line, self.col = line, col
        super().__init__(f"line {line}, column {col}: {msg}")


@dataclass
class Presentation:
    gens: list
    relators: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.gens)

    def __post_init__(self):
        for r in self.relators:
            for x in r:
                if x == 0 or abs(x) > self.n:
                    raise DomainError(f"generator index {x} out of range")

    def format(self) -> str:
        lines = ["gens: " + " ".join(self.gens)]
        lines += ["rel: " + format_word(r, self.gens) for r in self.relators]
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"gens": list(self.gens), "relators": [format_word(r, self.gens) for r in self.relators]}

    @classmethod
    def from_json(cls, d) -> "Presentation":
        return cls(list(d["gens"]), [parse_word(r, d["gens"]) for r in d["relators"]])


def parse_presentation(text: str) -> Presentation:
    gens = None
    rels = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#")[0]
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        body = line.strip()
        if body.startswith("gens:"):
            if gens is not None:
                raise ParseError("second gens line", ln, col)
            gens = body[5:].split()
            if not gens:
                raise ParseError("no generators", ln, col)
            for g in gens:
                if not g[0].isalpha() or not g[0].islower() or not g.isalnum():
                    raise ParseError(f"generator {g!r} must start with a lower-case letter",
                                     ln, line.index(g, col) + 1)
            if len(set(gens)) != len(gens):
                raise ParseError("repeated generator", ln, col)
        elif body.startswith("rel:"):
            if gens is None:
                raise ParseError("relator before the gens line", ln, col)
            toks = body[4:].split()
            if not toks:
                raise ParseError("empty relator", ln, col)
            known = set(gens) | {inverse_name(g) for g in gens}
            pos = line.index("rel:") + 4
            for t in toks:
                pos = line.index(t, pos)
                if t not in known:
                    raise ParseError(f"unknown generator {t!r}", ln, pos + 1)
                pos += len(t)
            w = free_reduce(parse_word(" ".join(toks), gens))
            if not w:
                raise ParseError("relator reduces to the empty word", ln, col)
            rels.append(w)
        else:
            raise ParseError("expected 'gens:' or 'rel:'", ln, col)
    if gens is None:
        raise ParseError("missing gens line", 1, 1)
    return Presentation(gens, rels)


def presentation_from_triangulation(triangles, gens_prefix: str = "e") -> Presentation:
    """Edge-path group of a simplicial 2-complex given by its triangles.

    Generators are the oriented edges outside a spanning tree of the
    1-skeleton; each triangle gives one relator.  Tree edges are dropped from
    relators, and relators that become empty are skipped.
    """
    tris = [tuple(sorted(t)) for t in triangles]
    edges = sorted({e for t in tris for e in itertools.combinations(t, 2)})
    verts = sorted({v for e in edges for v in e})
    parent = {v: v for v in verts}

    def root(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    tree = set()
    for a, b in edges:
        ra, rb = root(a), root(b)
        if ra != rb:
            parent[ra] = rb
            tree.add((a, b))
    free = [e for e in edges if e not in tree]
    index = {e: i + 1 for i, e in enumerate(free)}
    gens = [f"{gens_prefix}{a}x{b}" for a, b in free]
    rels = []
    for a, b, c in tris:
        w = []
        for (u, v), sgn in (((a, b), 1), ((b, c), 1), ((a, c), -1)):
            if (u, v) in index:
                w.append(sgn * index[(u, v)])
        w = free_reduce(w)
        if w:
            rels.append(w)
    return Presentation(gens, rels)


# the representation variety ---------------------------------------------

def var_index(k: int, i: int) -> int:
    """Index of z_{k,i}; k in 1..4, generator i 1-based."""
    return 4 * (i - 1) + (k - 1)


def var_names(n: int) -> list:
    return [f"z{k}_{i}" for i in range(1, n + 1) for k in range(1, 5)]


def _generic(n: int, i: int):
    z = [ps.MultiPoly.var(4 * n, var_index(k, i)) for k in range(1, 5)]
    return [[z[0], z[1]], [z[2], z[3]]]


def _mul(A, B):
    return [[A[r][0] * B[0][c] + A[r][1] * B[1][c] for c in range(2)] for r in range(2)]


def word_matrix(n: int, w):
    """Symbolic image of a word; inverses use the adjugate."""
    one, zero = ps.MultiPoly.const(4 * n, 1), ps.MultiPoly(4 * n)
    M = [[one, zero], [zero, one]]
    for x in w:
        G = _generic(n, abs(x))
        if x < 0:
            G = [[G[1][1], -G[0][1]], [-G[1][0], G[0][0]]]
        M = _mul(M, G)
    return M


def variety_equations(P: Presentation) -> ps.Ideal:
    n = P.n
    gens = []
    for i in range(1, n + 1):
        G = _generic(n, i)
        gens.append(G[0][0] * G[1][1] - G[0][1] * G[1][0] - 1)
    for r in P.relators:
        M = word_matrix(n, r)
        for a in range(2):
            for b in range(2):
                gens.append(M[a][b] - (1 if a == b else 0))
    return ps.Ideal(gens, 4 * n, ps.LEX, var_names(n))


def constrain_pair(I: ps.Ideal, k: int, l: int) -> ps.Ideal:
    """R_{k,l}: image of g_k has upper-right 1 and lower-left 0, image of g_l
    has upper-right 0.  Generators are 1-based."""
    if k == l:
        raise DomainError("constrain_pair needs two different generators")
    N = I.nvars
    v = lambda kk, i: ps.MultiPoly.var(N, var_index(kk, i))
    extra = [v(2, k) - 1, v(3, k), v(2, l)]
    # keep the raw generator list, adjoining exactly three equations
    return ps.Ideal(list(I.gens) + extra, N, I.order, list(I.names))


# representations ------------------------------------------------------------

@dataclass
class Representation:
    images: list
    pair: tuple | None = None

    def image(self, w) -> MatrixSL2:
        M = MatrixSL2.identity()
        for x in w:
            M = M * (self.images[x - 1] if x > 0 else self.images[-x - 1].inv())
        return M

    def satisfies(self, P: Presentation) -> bool:
        if len(self.images) != P.n:
            return False
        if not all((A.a * A.d - A.b * A.c).equals(1) for A in self.images):
            return False
        return all(self.image(r).is_identity() for r in P.relators)

    def same_as(self, o: "Representation") -> bool:
        return len(self.images) == len(o.images) and all(A == B for A, B in zip(self.images, o.images))

    def to_json(self, fields: list | None = None) -> dict:
        out = {"images": [[x.to_json(fields) for x in A.entries] for A in self.images]}
        if self.pair is not None:
            out["pair"] = list(self.pair)
        return out

    @classmethod
    def from_json(cls, d, fields: list | None = None) -> "Representation":
        from .algnum import AlgebraicNumber
        imgs = [MatrixSL2(*(AlgebraicNumber.from_json(x, fields) for x in m)) for m in d["images"]]
        return cls(imgs, tuple(d["pair"]) if d.get("pair") else None)


@dataclass
class Warning_:
    code: str
    message: str
    # False when the warning means candidates may be missing
    complete: bool = True


@dataclass
class Budget:
    groebner_steps: int = 20000
    grid_cap: int = 200000


@dataclass
class CandidateList:
    reps: list
    warnings: list = field(default_factory=list)
    pairs: dict = field(default_factory=dict)   # (k, l) -> "unit" | "positive_dim" | "points:N"

    @property
    def complete(self) -> bool:
        return all(w.complete for w in self.warnings)


def candidate_reps(P: Presentation, budget: Budget | None = None) -> CandidateList:
    budget = budget or Budget()
    out = CandidateList([])
    if P.n < 2:
        # every representation of a cyclic group is reducible, so nothing is missed
        out.warnings.append(Warning_("no_generator_pairs", "no generator pairs", complete=True))
        return out
    I = variety_equations(P)
    for k, l in itertools.permutations(range(1, P.n + 1), 2):
        J = constrain_pair(I, k, l)
        d = ps.dimension(J, budget.groebner_steps)
        if d < 0:
            out.pairs[(k, l)] = "unit"
            continue
        if d > 0:
            out.pairs[(k, l)] = "positive_dim"
            out.warnings.append(Warning_(
                "positive_dimensional",
                f"R_{{{k},{l}}} has dimension {d}: candidate extraction incomplete", complete=False))
            continue
        pts = ps.solve_zero_dim(J, budget.groebner_steps, budget.grid_cap)
        out.pairs[(k, l)] = f"points:{len(pts)}"
        for pt in pts:
            imgs = [MatrixSL2(*pt[4 * i:4 * i + 4], check=False) for i in range(P.n)]
            rep = Representation(imgs, (k, l))
            if not rep.satisfies(P):
                continue
            if any(rep.same_as(r) for r in out.reps):
                continue
            out.reps.append(rep)
    return out
