"""Polynomial ideals over Q: Groebner bases, dimension, elimination, solving.

Polynomials are dicts from exponent tuples to gmpy2 rationals.  Buchberger
runs with the product and chain criteria and a step budget.  Elimination of
a single variable uses linear algebra on normal forms modulo a degree
reverse lexicographic basis, which finds the same generator as a lex basis
would but is far cheaper.
"""
from __future__ import annotations

import ast
import heapq
import itertools
from dataclasses import dataclass, field

from gmpy2 import mpq

from .algnum import AlgebraicNumber, RationalPoly, isolate
from .algnum.ball import workprec
from .errors import DomainError, ResourceLimitError

LEX = "lex"
GREVLEX = "grevlex"


def _key(order: str):
    if order == LEX:
        return lambda e: e
    if order == GREVLEX:
        return lambda e: (sum(e), tuple(-x for x in reversed(e)))
    raise ValueError(f"unknown monomial order {order!r}")


class MultiPoly:
    """Sparse polynomial in a fixed number of variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for e, c in terms.items():
                c = mpq(c)
                if c != 0:
                    if len(e) != nvars:
                        raise ValueError("exponent length mismatch")
                    self.terms[tuple(e)] = c

    @classmethod
    def const(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> "MultiPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    def _new(self, terms) -> "MultiPoly":
        p = MultiPoly(self.nvars)
        p.terms = terms
        return p

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _coerce(self, o) -> "MultiPoly":
        return o if isinstance(o, MultiPoly) else MultiPoly.const(self.nvars, o)

    def __add__(self, o) -> "MultiPoly":
        o = self._coerce(o)
        t = dict(self.terms)
        for e, c in o.terms.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return self._new(t)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, o) -> "MultiPoly":
        return self + (-self._coerce(o))

    def __rsub__(self, o) -> "MultiPoly":
        return self._coerce(o) - self

    def __mul__(self, o) -> "MultiPoly":
        o = self._coerce(o)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = t.get(e, 0) + c1 * c2
                if v:
                    t[e] = v
                else:
                    t.pop(e, None)
        return self._new(t)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        out = MultiPoly.const(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c) -> "MultiPoly":
        c = mpq(c)
        if c == 0:
            return MultiPoly(self.nvars)
        return self._new({e: v * c for e, v in self.terms.items()})

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def variables(self) -> set:
        return {i for e in self.terms for i, x in enumerate(e) if x}

    def leading(self, order: str):
        e = max(self.terms, key=_key(order))
        return e, self.terms[e]

    def monic(self, order: str) -> "MultiPoly":
        _, c = self.leading(order)
        return self.scale(1 / c)

    def evaluate(self, values):
        """Exact value at a point (AlgebraicNumbers or rationals)."""
        acc = AlgebraicNumber.rational(0)
        powers: dict = {}
        for e, c in self.terms.items():
            term = AlgebraicNumber.rational(c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in powers:
                        powers[key] = values[i] ** k if isinstance(values[i], AlgebraicNumber) \
                            else AlgebraicNumber.rational(values[i]) ** k
                    term = term * powers[key]
            acc = acc + term
        return acc

    def enclose(self, balls):
        """Ball enclosure of the value at a point given by complex balls."""
        from flint import acb, arb
        acc = acb(0)
        for e, c in self.terms.items():
            term = acb(arb(_fq(c)))
            for i, k in enumerate(e):
                if k:
                    term = term * balls[i] ** k
            acc = acc + term
        return acc

    def to_univariate(self, i: int) -> RationalPoly:
        if self.variables() - {i}:
            raise ValueError("not univariate in the requested variable")
        deg = max((e[i] for e in self.terms), default=0)
        coeffs = [mpq(0)] * (deg + 1)
        for e, c in self.terms.items():
            coeffs[e[i]] = c
        return RationalPoly(coeffs)

    def format(self, names) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_key(GREVLEX), reverse=True):
            c = self.terms[e]
            mon = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            mag = abs(c)
            cs = f"{mag.numerator}" + (f"/{mag.denominator}" if mag.denominator != 1 else "")
            body = mon if (mon and mag == 1) else (f"{cs}*{mon}" if mon else cs)
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __repr__(self) -> str:
        return f"MultiPoly({self.format([f'x{i}' for i in range(self.nvars)])})"


def _fq(c):
    from flint import fmpq
    return fmpq(int(c.numerator), int(c.denominator))


@dataclass
class Ideal:
    gens: list
    nvars: int
    order: str = LEX
    names: list = field(default_factory=list)

    def __post_init__(self):
        self.gens = [g for g in self.gens if not g.is_zero()]
        if not self.names:
            self.names = [f"x{i}" for i in range(self.nvars)]

    def with_gens(self, gens, order=None) -> "Ideal":
        return Ideal(list(gens), self.nvars, order or self.order, list(self.names))

    def is_unit(self) -> bool:
        return any(g.total_degree() == 0 for g in self.gens)


# reduction ---------------------------------------------------------------

def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _shift(p: MultiPoly, e, c) -> dict:
    return {tuple(x + y for x, y in zip(m, e)): v * c for m, v in p.terms.items()}


def reduce(f: MultiPoly, basis, order: str) -> MultiPoly:
    """Fully reduced normal form of f modulo basis (any generating set)."""
    key = _key(order)
    leads = [(g.leading(order), g) for g in basis if not g.is_zero()]
    p = dict(f.terms)
    out = {}
    while p:
        e = max(p, key=key)
        c = p[e]
        for (le, lc), g in leads:
            if _divides(le, e):
                q = c / lc
                d = tuple(x - y for x, y in zip(e, le))
                for m, v in g.terms.items():
                    m2 = tuple(x + y for x, y in zip(m, d))
                    nv = p.get(m2, 0) - q * v
                    if nv:
                        p[m2] = nv
                    else:
                        p.pop(m2, None)
                break
        else:
            out[e] = c
            del p[e]
    r = MultiPoly(f.nvars)
    r.terms = out
    return r


def _spoly(f: MultiPoly, g: MultiPoly, order: str) -> MultiPoly:
    (ef, cf), (eg, cg) = f.leading(order), g.leading(order)
    L = _lcm(ef, eg)
    a = _shift(f, tuple(x - y for x, y in zip(L, ef)), 1 / cf)
    b = _shift(g, tuple(x - y for x, y in zip(L, eg)), 1 / cg)
    for m, v in b.items():
        nv = a.get(m, 0) - v
        if nv:
            a[m] = nv
        else:
            a.pop(m, None)
    out = MultiPoly(f.nvars)
    out.terms = a
    return out


def groebner(I: Ideal, max_steps: int = 20000) -> Ideal:
    """Reduced Groebner basis of I in I.order.

    Raises ResourceLimitError after ``max_steps`` S-polynomial reductions.
    Results are memoised on the generator set, since dimension, elimination
    and solving all start from the same basis.
    """
    ck = _cache_key(I)
    hit = _GB_CACHE.get(ck)
    if hit is not None:
        return I.with_gens(hit)
    out = _groebner(I, max_steps)
    if len(_GB_CACHE) > 64:
        _GB_CACHE.clear()
    _GB_CACHE[ck] = list(out.gens)
    return out


_GB_CACHE: dict = {}


def _cache_key(I: Ideal):
    return (I.order, I.nvars, frozenset(frozenset(g.terms.items()) for g in I.gens))


def _groebner(I: Ideal, max_steps: int) -> Ideal:
    order = I.order
    key = _key(order)
    G = [g.monic(order) for g in I.gens]
    if not G:
        return I.with_gens([])
    if any(g.total_degree() == 0 for g in G):
        return I.with_gens([MultiPoly.const(I.nvars, 1)])
    LM = [g.leading(order)[0] for g in G]
    pairs = set()
    heap = []

    def push(i, j):
        pairs.add((i, j))
        heapq.heappush(heap, (key(_lcm(LM[i], LM[j])), i, j))

    for i in range(len(G)):
        for j in range(i):
            push(i, j)
    steps = 0
    while heap:
        # normal strategy: smallest lcm first
        _, i, j = heapq.heappop(heap)
        pairs.discard((i, j))
        ei, ej = LM[i], LM[j]
        L = _lcm(ei, ej)
        if all(a == 0 or b == 0 for a, b in zip(ei, ej)):
            continue  # product criterion
        if any(k != i and k != j and _divides(LM[k], L)
               and (max(i, k), min(i, k)) not in pairs
               and (max(j, k), min(j, k)) not in pairs
               for k in range(len(G))):
            continue  # chain criterion
        steps += 1
        if steps > max_steps:
            raise ResourceLimitError("groebner S-pair reductions", max_steps)
        h = reduce(_spoly(G[i], G[j], order), G, order)
        if h.is_zero():
            continue
        h = h.monic(order)
        if h.total_degree() == 0:
            return I.with_gens([MultiPoly.const(I.nvars, 1)])
        G.append(h)
        LM.append(h.leading(order)[0])
        n = len(G) - 1
        for k in range(n):
            push(n, k)
    return I.with_gens(_reduced(G, order))


def _reduced(G, order):
    key = _key(order)
    G = [g for g in G if g is not None]
    # drop elements whose leading monomial is divisible by another's
    keep = []
    for i, g in enumerate(G):
        e = g.leading(order)[0]
        if any(j != i and _divides(h.leading(order)[0], e)
               and (h.leading(order)[0] != e or j < i)
               for j, h in enumerate(G)):
            continue
        keep.append(g)
    out = []
    for i, g in enumerate(keep):
        r = reduce(g, keep[:i] + keep[i + 1:], order)
        out.append(r.monic(order))
    out.sort(key=lambda g: key(g.leading(order)[0]), reverse=True)
    return out


def in_ideal(f: MultiPoly, basis: Ideal) -> bool:
    return reduce(f, basis.gens, basis.order).is_zero()


# dimension -------------------------------------------------------------

def dimension(I: Ideal, max_steps: int = 20000) -> int:
    """Krull dimension; -1 for the unit ideal."""
    G = groebner(I.with_gens(I.gens, GREVLEX), max_steps)
    if G.is_unit():
        return -1
    leads = [g.leading(GREVLEX)[0] for g in G.gens]
    n = I.nvars
    for size in range(n, -1, -1):
        for S in itertools.combinations(range(n), size):
            Sset = set(S)
            if all(any(e[v] and v not in Sset for v in range(n)) for e in leads):
                return size
    return 0


def _standard_monomials(leads, n):
    """Monomials not divisible by any leading monomial (finite when dim 0)."""
    bounds = []
    for v in range(n):
        pure = [e[v] for e in leads if all(e[w] == 0 for w in range(n) if w != v) and e[v] > 0]
        if not pure:
            return None
        bounds.append(min(pure))
    out = []
    for e in itertools.product(*(range(b) for b in bounds)):
        if not any(_divides(l, e) for l in leads):
            out.append(e)
    return out


def eliminate(I: Ideal, keep: int, max_steps: int = 20000) -> RationalPoly:
    """Generator of the elimination ideal I intersected with Q[x_keep]."""
    G = groebner(I.with_gens(I.gens, GREVLEX), max_steps)
    if G.is_unit():
        return RationalPoly([1])
    leads = [g.leading(GREVLEX)[0] for g in G.gens]
    if _standard_monomials(leads, I.nvars) is None:
        raise DomainError("ideal is not zero-dimensional")
    # find the first linear dependence among normal forms of x^0, x^1, ...
    x = MultiPoly.var(I.nvars, keep)
    rows = []  # echelon rows: (pivot monomial, vector dict, combination dict)
    power = MultiPoly.const(I.nvars, 1)
    k = 0
    while True:
        nf = reduce(power, G.gens, GREVLEX)
        vec = dict(nf.terms)
        comb = {k: mpq(1)}
        for piv, rv, rc in rows:
            c = vec.get(piv)
            if c:
                for m, v in rv.items():
                    nv = vec.get(m, 0) - c * v
                    if nv:
                        vec[m] = nv
                    else:
                        vec.pop(m, None)
                for m, v in rc.items():
                    nv = comb.get(m, 0) - c * v
                    if nv:
                        comb[m] = nv
                    else:
                        comb.pop(m, None)
        if not vec:
            coeffs = [comb.get(i, mpq(0)) for i in range(k + 1)]
            return RationalPoly(coeffs)
        piv = max(vec, key=_key(GREVLEX))
        c = vec[piv]
        rows.append((piv, {m: v / c for m, v in vec.items()}, {m: v / c for m, v in comb.items()}))
        power = reduce(power * x, G.gens, GREVLEX)
        k += 1


# solving -------------------------------------------------------------------

def _vanishes(p: MultiPoly, point, bits: int = 64) -> bool:
    """Exact test p(point) == 0, with a cheap enclosure filter first."""
    with workprec(bits + 20):
        balls = [v.enclose(bits) for v in point]
        z = p.enclose(balls)
    if not (z.real.contains(0) and z.imag.contains(0)):
        return False
    return p.evaluate(point).is_zero()


def solve_zero_dim(I: Ideal, max_steps: int = 20000, grid_cap: int = 200000) -> list:
    """All points of a zero-dimensional ideal, as tuples of AlgebraicNumbers."""
    n = I.nvars
    G = groebner(I.with_gens(I.gens, GREVLEX), max_steps)
    if G.is_unit():
        return []
    if _standard_monomials([g.leading(GREVLEX)[0] for g in G.gens], n) is None:
        raise DomainError("ideal is not zero-dimensional")
    choices = []
    total = 1
    for v in range(n):
        roots = isolate(eliminate(I, v, max_steps))
        choices.append(roots)
        total *= len(roots)
    if total > grid_cap:
        raise ResourceLimitError("candidate grid size", grid_cap)
    checks = G.gens + [g for g in I.gens]
    # prune with every polynomial as soon as its variables are all assigned
    by_level = [[] for _ in range(n)]
    for p in checks:
        vs = p.variables()
        by_level[max(vs) if vs else 0].append(p)
    partial = [()]
    for v in range(n):
        nxt = []
        for pt in partial:
            for r in choices[v]:
                cand = pt + (r,)
                full = cand + (AlgebraicNumber.rational(0),) * (n - v - 1)
                if all(_vanishes(p, full) for p in by_level[v]):
                    nxt.append(cand)
        partial = nxt
    return partial


# text format -------------------------------------------------------------------

def parse_poly(text: str, names) -> MultiPoly:
    n = len(names)
    index = {nm: i for i, nm in enumerate(names)}
    tree = ast.parse(text.replace("^", "**"), mode="eval").body

    def walk(node):
        if isinstance(node, ast.BinOp):
            a, b = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                if b.total_degree() > 0:
                    raise ValueError("division by a non-constant")
                return a.scale(1 / b.terms.get((0,) * n, mpq(0)))
            if isinstance(node.op, ast.Pow):
                if b.total_degree() > 0:
                    raise ValueError("non-constant exponent")
                k = b.terms.get((0,) * n, mpq(0))
                if k.denominator != 1 or k < 0:
                    raise ValueError("exponent must be a non-negative integer")
                return a ** int(k)
        if isinstance(node, ast.UnaryOp):
            v = walk(node.operand)
            if isinstance(node.op, ast.USub):
                return -v
            if isinstance(node.op, ast.UAdd):
                return v
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return MultiPoly.const(n, node.value)
        if isinstance(node, ast.Name):
            if node.id not in index:
                raise ValueError(f"unknown variable {node.id!r}")
            return MultiPoly.var(n, index[node.id])
        raise ValueError(f"unsupported syntax in polynomial: {ast.dump(node)}")
    return walk(tree)


def parse_ideal(text: str, order: str = LEX) -> Ideal:
    lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty ideal file")
    head = lines[0]
    if head.startswith("vars:"):
        head = head[5:]
    names = head.replace(",", " ").split()
    gens = [parse_poly(ln, names) for ln in lines[1:]]
    return Ideal(gens, len(names), order, names)


def format_ideal(I: Ideal) -> str:
    return "\n".join(["vars: " + " ".join(I.names)] + [g.format(I.names) for g in I.gens]) + "\n"
