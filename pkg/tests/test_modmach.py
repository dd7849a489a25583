import pytest
from hypothesis import given, settings, strategies as st

from oracles import naive_reaches_zero, naive_step
from torsionkit.km_sim import km_britton_reduce, km_schema, t_rs
from torsionkit.modmach import (
    Config,
    MachineError,
    ModularMachine,
    ModulusTooSmall,
    RunTrace,
    decode_word,
    encode_word,
    find_halting_run,
    halting_set_bounded,
    index_set,
    run,
    step,
)
from torsionkit.words import Word, parse_word

FIXTURE = ModularMachine(3, ((1, 0, 2, "R"), (0, 1, 5, "L")))
ONE = ModularMachine(2, ((1, 0, 0, "R"),))


def test_parse_round_trip():
    text = "# comment\nmodulus 3\nrule 1 0 2 R\nrule 0 1 5 L  # trailing\n"
    M = ModularMachine.parse(text)
    assert M == FIXTURE
    assert ModularMachine.parse(M.to_text()) == M
    assert ModularMachine.from_dict(M.to_dict()) == M
    assert M.stable_letters == ("r1", "l2")


@pytest.mark.parametrize("text", [
    "rule 1 0 2 R",
    "modulus 1",
    "modulus 3\nrule 3 0 0 R",
    "modulus 3\nrule 0 0 9 R",
    "modulus 3\nrule 0 0 1 X",
    "modulus 3\nrule 0 0 R",
    "modulus three",
])
def test_parse_errors(text):
    with pytest.raises(MachineError):
        ModularMachine.parse(text)


def test_step_examples():
    M = ModularMachine(3, ((1, 0, 2, "R"),))
    assert step(M, (4, 3)) == ((Config(11, 1), 0),)
    assert step(M, (0, 0)) == ()
    twin = ModularMachine(3, ((1, 0, 2, "R"), (1, 0, 4, "L")))
    assert {c for c, _ in step(twin, (4, 3))} == {Config(11, 1), Config(1, 13)}


@settings(max_examples=200)
@given(st.integers(0, 300), st.integers(0, 300))
def test_step_matches_reference(a, b):
    rules = [tuple(r) for r in FIXTURE.rules] + [(1, 0, 7, "L")]
    M = ModularMachine(3, tuple(rules))
    assert sorted(step(M, (a, b))) == sorted(naive_step(rules, 3, a, b))


def test_halting_set_examples():
    assert halting_set_bounded(ModularMachine(5), 5, 10) == {(0, 0)}
    H = halting_set_bounded(ONE, 4, 4)
    assert (1, 0) in H and (3, 0) not in H


def test_halting_set_matches_reference():
    rules = [(1, 0, 0, "R"), (0, 1, 2, "L"), (1, 1, 1, "R")]
    M = ModularMachine(2, tuple(rules))
    for S in (0, 1, 3):
        H = halting_set_bounded(M, 8, S)
        ref = {(a, b) for a in range(9) for b in range(9) if naive_reaches_zero(rules, 2, a, b, S)}
        assert H == ref


def test_halting_set_monotone():
    M = ModularMachine(2, ((1, 0, 0, "R"), (0, 1, 2, "L"), (1, 1, 1, "R")))
    small = halting_set_bounded(M, 5, 2)
    assert small <= halting_set_bounded(M, 8, 2)
    assert small <= halting_set_bounded(M, 5, 6)


def test_run_and_trace():
    t = run(ONE, 1, 0, 10)
    assert t.halted and t.configs == ((1, 0), (0, 0)) and t.rule_indices == (0,)
    stuck = run(ONE, 3, 0, 10)
    assert not stuck.halted and stuck.final == (4, 0)
    assert RunTrace.from_dict(t.to_dict()) == t


def test_run_respects_bound():
    loop = ModularMachine(2, ((0, 1, 1, "L"),))  # (0,1) -> (0,1)
    t = run(loop, 0, 1, 5)
    assert len(t.rule_indices) == 5 and not t.halted


def test_find_halting_run_is_consistent():
    M = ModularMachine(2, ((1, 0, 0, "R"), (0, 1, 2, "L"), (1, 1, 1, "R")))
    for a in range(9):
        for b in range(9):
            tr = find_halting_run(M, a, b, 4)
            if tr is None:
                continue
            assert tr.halted and tr.configs[0] == (a, b)
            for cfg, nxt, i in zip(tr.configs, tr.configs[1:], tr.rule_indices):
                assert (nxt, i) in step(M, cfg)


@pytest.mark.parametrize("w, n, m, alpha", [
    ("", 2, 5, 0),
    ("c1", 2, 5, 1),
    ("c1 c2", 2, 5, 7),
    ("c1^-1", 2, 5, 3),
    ("c2^-1 c1", 2, 5, 21),
])
def test_encode(w, n, m, alpha):
    assert encode_word(parse_word(w), n, m) == alpha
    assert decode_word(alpha, n, m) == parse_word(w)


def test_encode_errors():
    with pytest.raises(ModulusTooSmall):
        encode_word(parse_word("c1"), 2, 4)
    with pytest.raises(ValueError):
        encode_word(parse_word("c3"), 2, 5)
    with pytest.raises(ValueError):
        encode_word(parse_word("x"), 2, 5)


def test_decode_not_a_word():
    assert decode_word(15, 2, 5) is None
    assert decode_word(0, 2, 5) == Word()


@given(st.lists(st.tuples(st.integers(1, 3), st.sampled_from([1, -1])), max_size=12),
       st.integers(7, 11))
def test_encode_decode_round_trip(letters, m):
    w = Word((f"c{i}", s) for i, s in letters)
    assert decode_word(encode_word(w, 3, m), 3, m) == w


def test_index_set():
    got = index_set(1, 3, 40)
    assert got == [a for a in range(1, 41) if decode_word(a, 1, 3) is not None]
    assert got[:4] == [1, 2, 4, 5]


@pytest.mark.parametrize("i", range(len(FIXTURE.rules)))
def test_step_agrees_with_britton(i):
    schema = km_schema(FIXTURE)
    a, b, c, d = FIXTURE.rules[i]
    s = Word.gen(FIXTURE.stable_letter(i))
    for u in range(6):
        for v in range(6):
            cfg = (3 * u + a, 3 * v + b)
            (nxt, j), = step(FIXTURE, cfg)
            assert j == i
            w = s.inverse() * t_rs(*cfg) * s * t_rs(*nxt).inverse()
            assert km_britton_reduce(FIXTURE, w, schema) == Word()
