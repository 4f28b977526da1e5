"""Rejection loop: look for evidence that a representation is not discrete,
faithful and torsion-free.

Four kinds of witness are searched for, in this order: a common eigenvector
of the generator images, a nontrivial word sent to +-I, an elliptic or
parabolic image, and two noncommuting images of norm below the Margulis
threshold.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .algnum import Order
from .geom import Kind, MatrixSL2, classify, eigenvectors, norm_sq, same_vector
from .repfind import Representation
from .wordproblem import WordEnumerator, format_word

# ||A||^2 < 2 + 2^-58 together with ||B||^2 < 2 + 2^-58 forces A and B to commute
# in a discrete torsion-free group
MARGULIS_BOUND = mpq(2) + mpq(1, 2 ** 58)


def is_reducible(rep: Representation) -> bool:
    """True iff all generator images share an eigenvector (+-I impose nothing)."""
    common = None
    for A in rep.images:
        if A.is_pm_identity():
            continue
        vs = eigenvectors(A)
        if common is None:
            common = vs
        else:
            common = [u for u in common if any(same_vector(u, v) for v in vs)]
        if not common:
            return False
    return True


def common_eigenvector(rep: Representation):
    common = None
    for A in rep.images:
        if A.is_pm_identity():
            continue
        vs = eigenvectors(A)
        common = vs if common is None else [u for u in common if any(same_vector(u, v) for v in vs)]
    if common is None:
        return None
    return common[0] if common else None


@dataclass
class Rejection:
    reason: str          # reducible | kernel | elliptic_or_parabolic | small_noncommuting
    witness: dict

    def to_json(self) -> dict:
        return {"reason": self.reason, "witness": self.witness}


@dataclass
class RejectState:
    rep: Representation
    gens: list
    check_reducible: bool = True
    enum: WordEnumerator | None = None
    words: list = field(default_factory=list)
    P: list = field(default_factory=list)          # (word, matrix) with matrix not +-I
    mats: dict = field(default_factory=dict)       # word -> matrix
    small: list = field(default_factory=list)
    verdict: Rejection | None = None
    steps: int = 0

    def __post_init__(self):
        if self.enum is None:
            self.enum = WordEnumerator(len(self.rep.images))
        self.mats[()] = MatrixSL2.identity()

    @property
    def rejected(self) -> bool:
        return self.verdict is not None

    def matrix(self, w) -> MatrixSL2:
        M = self.mats.get(w)
        if M is None:
            x = w[-1]
            G = self.rep.images[x - 1] if x > 0 else self.rep.images[-x - 1].inv()
            M = self.matrix(w[:-1]) * G
            self.mats[w] = M
        return M

    def extend(self, batch: int) -> list:
        new = self.enum.take(batch)
        for w in new:
            M = self.matrix(w)
            self.words.append(w)
            if not M.is_pm_identity():
                self.P.append((w, M))
        return new


def find_kernel_witness(state: RejectState, oracle, start: int = 0):
    """First word (from index ``start``) sent to +-I but nontrivial in the group."""
    for w in state.words[start:]:
        M = state.matrix(w)
        if M.is_pm_identity() and not oracle.is_trivial(w):
            return w
    return None


def find_elliptic_or_parabolic(P):
    """First matrix of P that is elliptic or parabolic.  P holds matrices or
    (word, matrix) pairs."""
    for item in P:
        M = item[1] if isinstance(item, tuple) else item
        if classify(M) in (Kind.ELLIPTIC, Kind.PARABOLIC):
            return item
    return None


def find_small_noncommuting(P, small=None):
    """Two noncommuting elements of P, both of norm^2 below MARGULIS_BOUND.

    ``small`` may carry the small elements already found among earlier
    entries; it is extended in place.
    """
    small = [] if small is None else small
    for item in P:
        M = item[1] if isinstance(item, tuple) else item
        if norm_sq(M).compare_real(MARGULIS_BOUND) is Order.LESS:
            for other in small:
                N = other[1] if isinstance(other, tuple) else other
                if not M.commutes_with(N):
                    return other, item
            small.append(item)
    return None


def reject_step(state: RejectState, oracle, batch: int = 16) -> RejectState:
    if state.rejected:
        return state
    first = state.steps == 0
    state.steps += 1
    if first and state.check_reducible and is_reducible(state.rep):
        v = common_eigenvector(state.rep)
        state.verdict = Rejection("reducible", {
            "eigenvector": None if v is None else [x.to_json() for x in v]})
        return state
    start = len(state.words)
    p_start = len(state.P)
    state.extend(batch)
    w = find_kernel_witness(state, oracle, start)
    if w is not None:
        M = state.matrix(w)
        state.verdict = Rejection("kernel", {
            "word": format_word(w, state.gens), "image": "I" if M.is_identity() else "-I"})
        return state
    hit = find_elliptic_or_parabolic(state.P[p_start:])
    if hit is not None:
        w, M = hit
        state.verdict = Rejection("elliptic_or_parabolic", {
            "word": format_word(w, state.gens), "kind": classify(M).value,
            "trace": M.trace().to_json()})
        return state
    pair = find_small_noncommuting(state.P[p_start:], state.small)
    if pair is not None:
        (w1, A), (w2, B) = pair
        state.verdict = Rejection("small_noncommuting", {
            "words": [format_word(w1, state.gens), format_word(w2, state.gens)],
            "norms_sq": [norm_sq(A).to_json(), norm_sq(B).to_json()]})
    return state


def verify_rejection(rep: Representation, gens, rej: Rejection, oracle) -> bool:
    """Re-check a rejection witness from scratch."""
    from .wordproblem import parse_word
    if rej.reason == "reducible":
        return is_reducible(rep)
    if rej.reason == "kernel":
        w = parse_word(rej.witness["word"], gens)
        return rep.image(w).is_pm_identity() and not oracle.is_trivial(w)
    if rej.reason == "elliptic_or_parabolic":
        w = parse_word(rej.witness["word"], gens)
        return classify(rep.image(w)) in (Kind.ELLIPTIC, Kind.PARABOLIC)
    if rej.reason == "small_noncommuting":
        A, B = (rep.image(parse_word(x, gens)) for x in rej.witness["words"])
        return (norm_sq(A).compare_real(MARGULIS_BOUND) is Order.LESS
                and norm_sq(B).compare_real(MARGULIS_BOUND) is Order.LESS
                and not A.commutes_with(B))
    return False
