"""Words in free groups, their enumeration, and word-problem oracles.

A word is a tuple of nonzero ints: generator i (1-based) is ``i`` and its
inverse is ``-i``.  In text, generators are lower-case names and the
capitalised name is the inverse, so with generators ``a b`` the commutator
is ``a b A B``.
"""
from __future__ import annotations

import json
import shlex
import subprocess
import threading
from itertools import product
from pathlib import Path

from .errors import DomainError

Word = tuple


def free_reduce(w) -> Word:
    out = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(w) -> Word:
    return tuple(-x for x in reversed(w))


def inverse_name(name: str) -> str:
    return name[0].swapcase() + name[1:]


def parse_word(text: str, gens) -> Word:
    """Tokens separated by spaces; when every generator name is a single
    letter the compact form "abAB" is accepted too."""
    index = {}
    for i, g in enumerate(gens, 1):
        index[g] = i
        index[inverse_name(g)] = -i
    text = text.strip()
    if not text or text == "1":
        return ()
    toks = text.split()
    if len(toks) == 1 and toks[0] not in index and all(len(g) == 1 for g in gens):
        toks = list(toks[0])
    out = []
    for t in toks:
        if t not in index:
            raise DomainError(f"unknown generator {t!r}")
        out.append(index[t])
    return tuple(out)


def format_word(w, gens, style: str = "plain") -> str:
    """plain: "a B" (the line-protocol form), compact: "aB", pretty: "ab⁻¹"."""
    if not w:
        return "1"
    if style == "pretty":
        return "".join(gens[x - 1] if x > 0 else gens[-x - 1] + "⁻¹" for x in w)
    toks = [gens[x - 1] if x > 0 else inverse_name(gens[-x - 1]) for x in w]
    return ("" if style == "compact" else " ").join(toks)


def alphabet(n: int) -> list:
    """Letters in enumeration order, each followed by its inverse."""
    out = []
    for i in range(1, n + 1):
        out += [i, -i]
    return out


def words_of_length(n: int, length: int):
    """Freely reduced words of one length, lexicographic in alphabet order."""
    letters = alphabet(n)
    if length == 0:
        yield ()
        return
    for w in product(letters, repeat=length):
        if all(w[i] != -w[i + 1] for i in range(length - 1)):
            yield w


class WordEnumerator:
    """Breadth-first enumeration of nonempty freely reduced words.

    Words come in length-lexicographic order, except that each word is
    followed at once by its inverse (when that was not listed earlier), so
    every prefix of the output that ends on a pair boundary is closed under
    inverses.
    """

    def __init__(self, n: int):
        if n < 1:
            raise DomainError("need at least one generator")
        self.n = n
        self.count = 0
        self._frontier = [()]
        self._length = 0
        self._pending = []

    def _fill(self):
        letters = alphabet(self.n)
        self._length += 1
        nxt = [w + (x,) for w in self._frontier for x in letters if not (w and w[-1] == -x)]
        self._frontier = nxt
        seen = set()
        for w in nxt:
            if w in seen:
                continue
            self._pending.append(w)
            seen.add(w)
            wi = inverse(w)
            if wi not in seen:
                self._pending.append(wi)
                seen.add(wi)
        self._pending.reverse()

    def next(self) -> Word:
        if not self._pending:
            self._fill()
        self.count += 1
        return self._pending.pop()

    def take(self, k: int) -> list:
        """The next k words, rounded up so that the batch stays inverse-closed."""
        out = [self.next() for _ in range(k)]
        if out and self._pending and self._pending[-1] == inverse(out[-1]):
            out.append(self.next())
        return out


# oracles -------------------------------------------------------------------

class WordOracle:
    """Decides whether a word is trivial in a fixed presented group."""

    concurrent = True

    def is_trivial(self, w) -> bool:
        raise NotImplementedError

    def spec(self) -> dict:
        raise NotImplementedError


class FreeGroupOracle(WordOracle):
    def __init__(self, rank: int):
        self.rank = rank

    def is_trivial(self, w) -> bool:
        return not free_reduce(w)

    def spec(self) -> dict:
        return {"kind": "free", "rank": self.rank}


class FreeAbelianOracle(WordOracle):
    def __init__(self, rank: int):
        self.rank = rank

    def exponents(self, w) -> list:
        e = [0] * self.rank
        for x in w:
            e[abs(x) - 1] += 1 if x > 0 else -1
        return e

    def is_trivial(self, w) -> bool:
        return not any(self.exponents(w))

    def spec(self) -> dict:
        return {"kind": "abelian", "rank": self.rank}


class PermutationOracle(WordOracle):
    """A finite group given by one permutation (tuple of images) per
    generator.  Words act left to right: w = x y means apply x, then y.
    Only a faithful permutation representation gives a correct oracle."""

    def __init__(self, perms):
        self.perms = [tuple(p) for p in perms]
        m = len(self.perms[0]) if self.perms else 0
        for p in self.perms:
            if sorted(p) != list(range(m)):
                raise DomainError("not a permutation of 0..m-1")
        self.inverses = []
        for p in self.perms:
            q = [0] * m
            for i, j in enumerate(p):
                q[j] = i
            self.inverses.append(tuple(q))
        self.size = m

    def evaluate(self, w) -> tuple:
        cur = list(range(self.size))
        for x in w:
            p = self.perms[x - 1] if x > 0 else self.inverses[-x - 1]
            cur = [p[i] for i in cur]
        return tuple(cur)

    def is_trivial(self, w) -> bool:
        return self.evaluate(w) == tuple(range(self.size))

    def spec(self) -> dict:
        return {"kind": "permutation", "perms": [list(p) for p in self.perms]}


class LinearOracle(WordOracle):
    """w is trivial iff its image under a fixed representation is I.

    This is a valid oracle only for a representation already known to be
    faithful, so it is meant for test fixtures.
    """

    def __init__(self, images, source: dict | None = None):
        self.images = list(images)
        self.source = source

    def matrix(self, w):
        from .geom import MatrixSL2
        w = free_reduce(w)
        M = MatrixSL2.identity()
        for x in w:
            M = M * (self.images[x - 1] if x > 0 else self.images[-x - 1].inv())
        return M

    def is_trivial(self, w) -> bool:
        return self.matrix(w).is_identity()

    def spec(self) -> dict:
        if self.source is not None:
            return dict(self.source)
        return {"kind": "linear", "matrices": [A.to_json() for A in self.images]}


class SubprocessOracle(WordOracle):
    """External solver speaking a line protocol: one freely reduced word per
    line in the presentation's tokens (the empty word as an empty line),
    answered by "trivial" or "nontrivial"."""

    concurrent = False

    def __init__(self, command, gens):
        self.command = command if isinstance(command, list) else shlex.split(command)
        self.gens = list(gens)
        self._proc = None
        self._lock = threading.Lock()

    def _start(self):
        if self._proc is None or self._proc.poll() is not None:
            self._proc = subprocess.Popen(self.command, stdin=subprocess.PIPE, stdout=subprocess.PIPE,
                                          text=True, bufsize=1)

    def is_trivial(self, w) -> bool:
        w = free_reduce(w)
        # the identity goes out as an empty line
        line = format_word(w, self.gens) if w else ""
        with self._lock:
            self._start()
            self._proc.stdin.write(line + "\n")
            self._proc.stdin.flush()
            ans = self._proc.stdout.readline().strip()
        if ans == "trivial":
            return True
        if ans == "nontrivial":
            return False
        raise OracleError(f"oracle answered {ans!r} for {line!r}")

    def close(self):
        if self._proc is not None:
            self._proc.stdin.close()
            self._proc.wait(timeout=5)
            self._proc = None

    def spec(self) -> dict:
        return {"kind": "subprocess", "command": list(self.command)}


class OracleError(RuntimeError):
    pass


def oracle_from_spec(spec, gens) -> WordOracle:
    """Build an oracle from a dict, a JSON file path, or a short string:
    "free", "abelian", "exec:<command line>", or "linear:<fixture name>"."""
    n = len(gens)
    if isinstance(spec, str):
        if spec == "free":
            return FreeGroupOracle(n)
        if spec == "abelian":
            return FreeAbelianOracle(n)
        if spec.startswith("exec:"):
            return SubprocessOracle(spec[5:], gens)
        if spec.startswith("linear:"):
            spec = {"kind": "linear", "fixture": spec[7:]}
            return oracle_from_spec(spec, gens)
        spec = json.loads(Path(spec).read_text())
    kind = spec.get("kind")
    if kind == "free":
        return FreeGroupOracle(spec.get("rank", n))
    if kind == "abelian":
        return FreeAbelianOracle(spec.get("rank", n))
    if kind == "permutation":
        return PermutationOracle(spec["perms"])
    if kind == "subprocess":
        return SubprocessOracle(spec["command"], gens)
    if kind == "linear":
        if "fixture" in spec:
            from .fixtures import load_fixture
            _, rep = load_fixture(spec["fixture"])
            return LinearOracle(rep.images, {"kind": "linear", "fixture": spec["fixture"]})
        from .geom import MatrixSL2
        return LinearOracle([MatrixSL2.from_json(m) for m in spec["matrices"]])
    raise DomainError(f"unknown oracle kind {kind!r}")
