import itertools
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypdecide.errors import DomainError
from hypdecide.geom import MatrixSL2, diag
from hypdecide.wordproblem import (FreeAbelianOracle, FreeGroupOracle, LinearOracle, OracleError,
                                   PermutationOracle, SubprocessOracle, WordEnumerator,
                                   format_word, free_reduce, inverse, oracle_from_spec,
                                   parse_word, words_of_length)

GENS = ["a", "b"]


def all_words(n, max_len):
    letters = [x for i in range(1, n + 1) for x in (i, -i)]
    for k in range(max_len + 1):
        yield from itertools.product(letters, repeat=k)


def naive_reduce(w):
    w = list(w)
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i] == -w[i + 1]:
                del w[i:i + 2]
                changed = True
                break
    return tuple(w)


# word syntax ---------------------------------------------------------------------

def test_parse_and_format():
    w = parse_word("a b A B", GENS)
    assert w == (1, 2, -1, -2)
    assert parse_word("abAB", GENS) == w
    assert format_word(w, GENS) == "a b A B"
    assert format_word(w, GENS, "compact") == "abAB"
    assert format_word((1, -2), GENS, "pretty") == "ab⁻¹"
    assert parse_word("1", GENS) == () and format_word((), GENS) == "1"
    with pytest.raises(DomainError):
        parse_word("a c", GENS)


def test_multi_letter_names():
    gens = ["x1", "x2"]
    assert parse_word("x1 X2", gens) == (1, -2)
    with pytest.raises(DomainError):
        parse_word("x1X2", gens)


@settings(max_examples=100)
@given(st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=12))
def test_free_reduce_matches_naive(w):
    assert free_reduce(w) == naive_reduce(w)
    assert free_reduce(tuple(w) + inverse(w)) == ()


# enumeration ---------------------------------------------------------------------

def test_enumeration_order():
    e = WordEnumerator(2)
    got = [format_word(e.next(), GENS, "compact") for _ in range(10)]
    assert got == ["a", "A", "b", "B", "aa", "AA", "ab", "BA", "aB", "bA"]


def test_enumeration_is_complete_and_repeat_free():
    e = WordEnumerator(2)
    expect = {w for k in range(1, 5) for w in words_of_length(2, k)}
    got = [e.next() for _ in range(len(expect))]
    assert len(set(got)) == len(got)
    assert set(got) == expect


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.lists(st.integers(1, 20), min_size=1, max_size=10))
def test_batches_are_inverse_closed(n, sizes):
    e = WordEnumerator(n)
    seen = set()
    for k in sizes:
        batch = e.take(k)
        assert len(batch) >= k
        seen.update(batch)
        assert all(inverse(w) in seen for w in seen)


def test_enumerator_needs_generators():
    with pytest.raises(DomainError):
        WordEnumerator(0)


# oracles against brute force --------------------------------------------------------

def test_free_oracle_brute_force():
    o = FreeGroupOracle(2)
    for w in all_words(2, 6):
        assert o.is_trivial(w) == (naive_reduce(w) == ())


def test_abelian_oracle_brute_force():
    o = FreeAbelianOracle(2)
    for w in all_words(2, 6):
        counts = [sum(1 for x in w if x == g) - sum(1 for x in w if x == -g) for g in (1, 2)]
        assert o.is_trivial(w) == (counts == [0, 0])


S3 = [(1, 0, 2), (0, 2, 1)]          # two transpositions generate S3


def _compose(word):
    """Left-to-right action on 0..2 as explicit dicts."""
    maps = {1: dict(enumerate(S3[0])), 2: dict(enumerate(S3[1]))}
    for g in (1, 2):
        maps[-g] = {v: k for k, v in maps[g].items()}
    out = {i: i for i in range(3)}
    for x in word:
        out = {i: maps[x][out[i]] for i in range(3)}
    return out


def test_permutation_oracle_brute_force():
    o = PermutationOracle(S3)
    for w in all_words(2, 6):
        assert o.is_trivial(w) == (_compose(w) == {0: 0, 1: 1, 2: 2})
    assert o.is_trivial((1, 1)) and not o.is_trivial((1, 2))
    assert o.is_trivial((1, 2) * 3)


def test_permutation_oracle_validates():
    with pytest.raises(DomainError):
        PermutationOracle([(0, 0, 1)])


def test_linear_oracle_on_free_subgroup():
    # Sanov: these generate a free group
    o = LinearOracle([MatrixSL2(1, 2, 0, 1), MatrixSL2(1, 0, 2, 1)])
    free = FreeGroupOracle(2)
    for w in all_words(2, 5):
        assert o.is_trivial(w) == free.is_trivial(w)


def test_oracle_specs_round_trip():
    for o in (FreeGroupOracle(2), FreeAbelianOracle(2), PermutationOracle(S3),
              LinearOracle([diag(2), diag(3)])):
        again = oracle_from_spec(o.spec(), GENS)
        for w in all_words(2, 3):
            assert again.is_trivial(w) == o.is_trivial(w)
    with pytest.raises(DomainError):
        oracle_from_spec({"kind": "nope"}, GENS)


SOLVER = """
import sys
for line in sys.stdin:
    toks = line.split()
    if toks == ["boom"]:
        print("maybe", flush=True)
        continue
    e = {}
    for t in toks:
        k = t.lower()
        e[k] = e.get(k, 0) + (1 if t == k else -1)
    print("trivial" if not any(e.values()) else "nontrivial", flush=True)
"""


def test_subprocess_oracle(tmp_path):
    script = tmp_path / "solver.py"
    script.write_text(SOLVER)
    o = oracle_from_spec(f"exec:{sys.executable} {script}", GENS)
    assert isinstance(o, SubprocessOracle) and not o.concurrent
    try:
        assert o.is_trivial((1, 2, -1, -2))
        assert not o.is_trivial((1, 2))
        assert o.is_trivial(())
        abelian = FreeAbelianOracle(2)
        for w in all_words(2, 3):
            assert o.is_trivial(w) == abelian.is_trivial(w)
    finally:
        o.close()


def test_subprocess_oracle_bad_answer(tmp_path):
    script = tmp_path / "solver.py"
    script.write_text(SOLVER)
    o = SubprocessOracle([sys.executable, str(script)], ["boom"])
    try:
        with pytest.raises(OracleError):
            o.is_trivial((1,))
    finally:
        o.close()
