"""Simple algebraic extensions Q(theta) with a fixed complex embedding.

A field is named by (minimal polynomial of theta, root index).  Elements
are FLINT rational polynomials reduced modulo the minimal polynomial.
Fields learn about each other through embeddings: theta_K maps to an
element of L.  When two numbers from unrelated fields meet, we build the
compositum once (primitive element theta_K + t*theta_L) and cache it.
"""
from __future__ import annotations

import threading

from flint import acb, arb, fmpq, fmpq_mat, fmpq_poly

from .ball import acb_rect, fmpq_to_q, q_to_fmpq, rel_bits, workprec
from .roots import rootset
from .upoly import RationalPoly, composed_sum, factor, from_power_sums, power_sums

_LOCK = threading.RLock()
_FIELDS: dict = {}
_COMMON: dict = {}


class NumberField:
    __slots__ = ("poly", "index", "degree", "mod", "roots", "real", "_traces",
                 "embeds", "_conj", "__weakref__")

    def __init__(self, poly: RationalPoly, index: int):
        self.poly = poly
        self.index = index
        self.degree = poly.degree
        self.mod = fmpq_poly(list(poly.coeffs))
        self.roots = rootset(poly)
        self.real = self.roots.real[index]
        self._traces = None
        self.embeds: dict = {}
        self._conj = None

    @property
    def key(self):
        return (self.poly, self.index)

    def __repr__(self) -> str:
        return f"NumberField({self.poly}, root {self.index})"

    # element arithmetic -------------------------------------------------
    def reduce(self, e: fmpq_poly) -> fmpq_poly:
        if e.degree() < self.degree:
            return e
        return e % self.mod

    def mul(self, a: fmpq_poly, b: fmpq_poly) -> fmpq_poly:
        return self.reduce(a * b)

    def inv(self, a: fmpq_poly) -> fmpq_poly:
        if a.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if a.degree() == 0:
            return fmpq_poly([1 / a.coeffs()[0]])
        g, s, t = self.mod.xgcd(a)
        # g is a nonzero constant because mod is irreducible
        return self.reduce(t / g.coeffs()[0])

    def power(self, a: fmpq_poly, k: int) -> fmpq_poly:
        if k < 0:
            return self.power(self.inv(a), -k)
        out = fmpq_poly([1])
        base = a
        while k:
            if k & 1:
                out = self.mul(out, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return out

    def evaluate(self, e: fmpq_poly, at: fmpq_poly) -> fmpq_poly:
        """e(at) reduced in this field."""
        acc = fmpq_poly([])
        for c in reversed(e.coeffs()):
            acc = self.reduce(acc * at) + c
        return acc

    def trace(self, e: fmpq_poly):
        if self._traces is None:
            self._traces = [q_to_fmpq(s) for s in power_sums(self.poly, self.degree)]
        return sum((c * t for c, t in zip(e.coeffs(), self._traces)), fmpq(0))

    def charpoly(self, e: fmpq_poly) -> RationalPoly:
        n = self.degree
        s = [fmpq(n)]
        p = fmpq_poly([1])
        for _ in range(n):
            p = self.mul(p, e)
            s.append(self.trace(p))
        return from_power_sums([fmpq_to_q(x) for x in s], n)

    def min_poly(self, e: fmpq_poly) -> RationalPoly:
        if e.degree() <= 0:
            c = e.coeffs()[0] if e.degree() == 0 else fmpq(0)
            return RationalPoly([-fmpq_to_q(c), 1])
        cp = self.charpoly(e).flint()
        g = cp.gcd(cp.derivative())
        return RationalPoly.from_roots_of(cp // g)

    def conj_image(self):
        """Complex conjugate of theta as an element of this field, or None."""
        if self.real:
            return X
        if self._conj is None:
            cidx = self.roots.conj_index(self.index)
            Kc, tbar = generator(self.poly, cidx)
            if Kc is self:
                self._conj = (tbar,)
            else:
                F, ik, ic = common_field(self, Kc)
                if F is self:
                    self._conj = (self.evaluate(tbar, ic),)
                else:
                    self._conj = (None,)
        return self._conj[0]

    # numerics -----------------------------------------------------------
    def theta(self, bits: int) -> acb:
        return self.roots.ball(self.index, bits)

    def enclose(self, e: fmpq_poly, bits: int) -> acb:
        """Ball around e(theta) of radius below 2**-bits."""
        coeffs = e.coeffs()
        if len(coeffs) <= 1:
            c = coeffs[0] if coeffs else fmpq(0)
            with workprec(bits + 10):
                return acb(arb(c))
        prec = bits + 20
        while True:
            th = self.theta(prec)
            with workprec(prec + 20):
                acc = acb(0)
                for c in reversed(coeffs):
                    acc = acc * th + arb(c)
            if rel_bits(acc) >= bits:
                return acc
            prec *= 2


def get_field(poly: RationalPoly, index: int) -> NumberField:
    key = (poly, index)
    f = _FIELDS.get(key)
    if f is not None:
        return f
    with _LOCK:
        f = _FIELDS.get(key)
        if f is None:
            f = NumberField(poly, index)
            _FIELDS[key] = f
        return f


QQ = get_field(RationalPoly([0, 1]), 0)
X = fmpq_poly([0, 1])


def generator(poly: RationalPoly, index: int) -> tuple[NumberField, fmpq_poly]:
    """Field and element for root ``index`` of an irreducible ``poly``.

    Both roots of a quadratic live in the field of root 0, so conjugate
    quadratic irrationals share one field.
    """
    if poly.degree == 1:
        c0, c1 = poly.coeffs
        return QQ, fmpq_poly([fmpq(-c0, c1)])
    if poly.degree == 2 and index == 1:
        K = get_field(poly, 0)
        c0, c1, c2 = poly.coeffs
        return K, fmpq_poly([fmpq(-c1, c2), -1])
    return get_field(poly, index), X


def select_root(polys, enclose, max_bits: int = 1 << 16) -> tuple[RationalPoly, int]:
    """The unique root among ``polys`` matching the enclosure function.

    ``enclose(bits)`` returns a ball around the wanted value.  The polys
    must have the wanted value as a root and distinct roots from each
    other, so refinement always terminates.
    """
    polys = [p for p in polys if p.degree and p.degree >= 1]
    sets = [rootset(p) for p in polys]
    cands = [(i, k) for i, rs in enumerate(sets) for k in range(len(rs))]
    bits = 24
    while True:
        E = acb_rect(enclose(bits))
        cands = [(i, k) for i, k in cands if sets[i].rect(k, bits).overlaps(E)]
        if len(cands) == 1:
            i, k = cands[0]
            return polys[i], k
        if not cands:
            raise ArithmeticError("no root matches the enclosure")
        if bits > max_bits:
            raise ArithmeticError("root selection did not converge")
        bits *= 2


def locate(poly: RationalPoly, enclose) -> int:
    return select_root([poly], enclose)[1]


# embeddings -------------------------------------------------------------

def add_embedding(K: NumberField, L: NumberField, image: fmpq_poly) -> None:
    with _LOCK:
        K.embeds.setdefault(L.key, (L, image))


def _parents(K: NumberField, max_depth: int = 4) -> dict:
    """Fields reachable from K through embeddings, with BFS parents."""
    par = {K.key: None}
    frontier = [K]
    for _ in range(max_depth):
        nxt = []
        for A in frontier:
            for key, (B, _) in list(A.embeds.items()):
                if key not in par:
                    par[key] = A
                    nxt.append(B)
        frontier = nxt
    return par


def _path_image(K: NumberField, par: dict, target: NumberField) -> fmpq_poly:
    """Image of theta_K in target following the BFS parents."""
    chain = []
    node = target
    while node is not K:
        A = par[node.key]
        chain.append((A, node))
        node = A
    img = X
    for A, B in reversed(chain):
        # theta_K = img(theta_A) and theta_A -> A.embeds[B]
        img = B.evaluate(img, A.embeds[B.key][1])
    return img


def common_field(K: NumberField, L: NumberField):
    """(F, image of theta_K in F, image of theta_L in F)."""
    if K is L:
        return K, X, X
    if K.degree == 1:
        return L, None, X
    if L.degree == 1:
        return K, X, None
    hit = _COMMON.get((K.key, L.key))
    if hit is not None:
        return hit
    pk, pl = _parents(K), _parents(L)
    if L.key in pk:
        res = (L, _path_image(K, pk, L), X)
    elif K.key in pl:
        res = (K, X, _path_image(L, pl, K))
    else:
        shared = [key for key in pk if key in pl]
        best = min(shared, key=lambda k: _FIELDS[k].degree, default=None)
        if best is not None and _FIELDS[best].degree <= K.degree * L.degree:
            F = _FIELDS[best]
            res = (F, _path_image(K, pk, F), _path_image(L, pl, F))
        else:
            res = _compositum(K, L)
    with _LOCK:
        _COMMON[(K.key, L.key)] = res
        _COMMON[(L.key, K.key)] = (res[0], res[2], res[1])
    return res


def embed(e: fmpq_poly, F: NumberField, image) -> fmpq_poly:
    if image is None or e.degree() <= 0:
        return e
    if image is X:
        return e
    return F.evaluate(e, image)


def _trace_image(K: NumberField, L: NumberField, t: int, big: RationalPoly) -> fmpq_poly:
    """theta_K as a polynomial in gamma = theta_K + t*theta_L, modulo big.

    Works in the algebra K (x) L = Q[x]/(big), big squarefree, where gamma
    generates.  Solves the trace-form system
    Tr(theta_K gamma^j) = sum_k c_k Tr(gamma^(j+k)); every trace is a
    rational combination of power sums.
    """
    n = big.degree
    pf = power_sums(big, 2 * n)
    pk = power_sums(K.poly, n + 1)
    pl = power_sums(L.poly, n)
    binom = [[1]]
    for r in range(1, n):
        prev = binom[-1]
        binom.append([1] + [prev[i - 1] + prev[i] for i in range(1, r)] + [1])
    rhs = []
    for j in range(n):
        acc = 0
        for i in range(j + 1):
            acc += binom[j][i] * pk[i + 1] * (t ** (j - i)) * pl[j - i]
        rhs.append(q_to_fmpq(acc))
    T = fmpq_mat(n, n, [q_to_fmpq(pf[a + b]) for a in range(n) for b in range(n)])
    sol = T.solve(fmpq_mat(n, 1, rhs))
    return fmpq_poly([sol[k, 0] for k in range(n)])


def _compositum(K: NumberField, L: NumberField):
    for t in (1, -1, 2, -2, 3, -3, 5, 7, 11, 13):
        Lt = L.poly.scale_var(fmpq_to_q(fmpq(t)))
        big = composed_sum(K.poly, Lt)
        facs = factor(big)
        if any(m > 1 for _, m in facs):
            continue
        facs = [f for f, _ in facs]

        def enc(bits, t=t):
            a, b = K.theta(bits + 8), L.theta(bits + 8)
            with workprec(bits + 30):
                return a + b * t
        f, k = select_root(facs, enc)
        F, gamma = generator(f, k)
        inv_t = fmpq_poly([fmpq(1, t)])
        c = _trace_image(K, L, t, big)
        img_k = F.evaluate(c, gamma)
        img_l = F.mul(gamma - img_k, inv_t)
        # if F is just K (or L) again, map the other field into it directly
        if F.degree == K.degree and F is not K:
            h = express_in_powers(F, img_k)
            add_embedding(L, K, K.evaluate(img_l, h))
            return K, X, K.evaluate(img_l, h)
        if F.degree == L.degree and F is not L:
            h = express_in_powers(F, img_l)
            add_embedding(K, L, L.evaluate(img_k, h))
            return L, L.evaluate(img_k, h), X
        if F is not K:
            add_embedding(K, F, img_k)
        if F is not L:
            add_embedding(L, F, img_l)
        return F, img_k, img_l
    raise ArithmeticError("no primitive element found for compositum")


def express_in_powers(F: NumberField, a: fmpq_poly):
    """Rational poly h with h(a) = theta_F, or None if a does not generate F."""
    n = F.degree
    cols = []
    p = fmpq_poly([1])
    for _ in range(n):
        cols.append([p.coeffs()[i] if i <= p.degree() else fmpq(0) for i in range(n)])
        p = F.mul(p, a)
    M = fmpq_mat(n, n, [cols[j][i] for i in range(n) for j in range(n)])
    if M.rank() < n:
        return None
    rhs = fmpq_mat(n, 1, [fmpq(1) if i == 1 else fmpq(0) for i in range(n)])
    sol = M.solve(rhs)
    return fmpq_poly([sol[i, 0] for i in range(n)])
