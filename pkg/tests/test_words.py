import pytest
from hypothesis import given, strategies as st

from oracles import naive_free_reduce
from torsionkit.words import (
    EMPTY,
    Alphabet,
    GeneratorMap,
    Letter,
    UnknownGenerator,
    Word,
    WordError,
    WordSyntaxError,
    commutator,
    concat,
    conjugate,
    cyclic_permutations,
    cyclic_reduce,
    free_reduce,
    parse_word,
    str_cyclic_key,
    str_min_rotation,
)

letters = st.tuples(st.sampled_from("xyz"), st.sampled_from((1, -1)))
words = st.lists(letters, max_size=30).map(Word)


@pytest.mark.parametrize("text, expected", [
    ("x", [("x", 1)]),
    ("x^-2", [("x", -1), ("x", -1)]),
    ("(x t)^2", [("x", 1), ("t", 1), ("x", 1), ("t", 1)]),
    ("(x y)^-1", [("y", -1), ("x", -1)]),
    ("1", []),
    ("", []),
    ("a' b_2", [("a'", 1), ("b_2", 1)]),
])
def test_parse(text, expected):
    assert parse_word(text) == Word(expected)


@pytest.mark.parametrize("bad", ["x^", "(x", "x)", "x ^ y", "3x!"])
def test_parse_errors(bad):
    with pytest.raises(WordSyntaxError):
        parse_word(bad)


def test_format_run_length():
    assert str(parse_word("x x x t^-1")) == "x^3 t^-1"
    assert str(EMPTY) == "1"


@given(words)
def test_format_parse_round_trip(w):
    assert parse_word(str(w)) == w


@given(words)
def test_free_reduce_matches_naive(w):
    assert list(free_reduce(w)) == [Letter(*l) for l in naive_free_reduce(w)]


@given(words, words)
def test_inverse_cancels(u, v):
    assert concat(u, u.inverse()) == EMPTY
    assert concat(u, v).inverse() == concat(v.inverse(), u.inverse())


@given(words)
def test_cyclic_reduce_conjugates_back(w):
    w = free_reduce(w)
    core, conj = cyclic_reduce(w)
    assert concat(conj, core, conj.inverse()) == w
    assert core.is_cyclically_reduced


def test_cyclic_permutations_dedup():
    assert len(cyclic_permutations(parse_word("x y x y"))) == 2
    assert cyclic_permutations(parse_word("x y z"))[1] == parse_word("y z x")


def test_commutator_and_conjugate():
    x, y = Word.gen("x"), Word.gen("y")
    assert commutator(x, y) == parse_word("x y x^-1 y^-1")
    assert conjugate(x, y) == parse_word("y^-1 x y")


def test_word_sign_validation():
    with pytest.raises(WordError):
        Word([("x", 2)])


def test_generator_map():
    phi = GeneratorMap({"a": "a^2", "t": "t"})
    assert phi(parse_word("t^-1 a t")) == parse_word("t^-1 a^2 t")
    with pytest.raises(UnknownGenerator):
        phi(parse_word("b"))


def test_alphabet_codes_round_trip():
    A = Alphabet(["x", "t"])
    w = parse_word("x t^-1 x^-1")
    assert A.encode(w) == (0, 3, 1)
    assert A.decode(A.encode(w)) == w
    assert A.from_str(A.to_str(w)) == w


@given(st.text(alphabet="abc", max_size=12))
def test_min_rotation_is_least(s):
    if s:
        assert str_min_rotation(s) == min(s[i:] + s[:i] for i in range(len(s)))


@given(words)
def test_cyclic_key_invariant(w):
    A = Alphabet("xyz")
    s = A.to_str(free_reduce(w))
    rot = s[3:] + s[:3] if len(s) > 3 else s
    assert str_cyclic_key(s) == str_cyclic_key(rot) == str_cyclic_key(A.to_str(free_reduce(w).inverse()))
