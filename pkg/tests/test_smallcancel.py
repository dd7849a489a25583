import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import corpus, naive_max_ratio, naive_pieces, random_reduced_word
from torsionkit.presentations import FinitePresentation, symmetrize
from torsionkit.smallcancel import (
    INFINITE,
    DehnRewriter,
    OrderVerdict,
    PieceReport,
    PreconditionFailed,
    check_metric,
    dehn_reduce,
    element_order,
    enumerate_pieces,
    is_c16,
    proper_power_decomposition,
)
from torsionkit.torsion_ladder import build_ptk
from torsionkit.words import Word, parse_word

P = FinitePresentation.parse
PTK12 = P("gens: x t\nrel: (x t)^12\nrel: t^12")
S12 = symmetrize(PTK12)
SAMPLE = corpus(size=40)


def test_pieces_single_power_relator():
    rep = enumerate_pieces(symmetrize(P("gens: x t\nrel: (x t)^12")))
    assert rep.pieces == frozenset()
    assert rep.global_max_ratio == 0


def test_pieces_ptk12():
    rep = enumerate_pieces(S12)
    assert rep.pieces == {parse_word("t"), parse_word("t^-1")}
    assert rep.per_relator_max[0][2] == Fraction(1, 24)
    assert rep.per_relator_max[1][2] == Fraction(1, 12)
    assert rep.global_max_ratio == Fraction(1, 12)


def test_pieces_square():
    assert enumerate_pieces(symmetrize(P("gens: x\nrel: x^2"))).pieces == frozenset()


@pytest.mark.parametrize("idx", range(len(SAMPLE)))
def test_pieces_match_bruteforce(idx):
    Q = SAMPLE[idx]
    rep = enumerate_pieces(symmetrize(Q))
    assert rep.pieces == naive_pieces(Q)
    assert rep.global_max_ratio == naive_max_ratio(Q)


@pytest.mark.parametrize("idx", range(0, len(SAMPLE), 4))
@pytest.mark.parametrize("k", [12, 24])
def test_ptk_satisfies_metric(idx, k):
    ok, rep = check_metric(symmetrize(build_ptk(SAMPLE[idx], k)), Fraction(2, k))
    assert ok and rep.global_max_ratio < Fraction(2, k)


def test_check_metric_examples():
    assert check_metric(S12, Fraction(1, 6))[0]
    assert check_metric(symmetrize(P("gens: x y")), Fraction(1, 100))[0]
    ok, rep = check_metric(symmetrize(P("gens: x y\nrel: x y x y\nrel: x y x y^-1")), Fraction(1, 6))
    assert not ok and rep.global_max_ratio == Fraction(3, 4)


def test_check_metric_is_strict():
    # the longest piece ratio is exactly 1/12
    assert not check_metric(S12, Fraction(1, 12))[0]
    assert check_metric(S12, Fraction(1, 11))[0]


@pytest.mark.parametrize("lam", [0, 1, Fraction(3, 2), -1])
def test_check_metric_rejects_lambda(lam):
    with pytest.raises(ValueError):
        check_metric(S12, lam)


def test_piece_report_round_trip():
    rep = enumerate_pieces(S12)
    assert PieceReport.from_dict(rep.to_dict()) == rep


@pytest.mark.parametrize("r, root, n", [
    ("(x t)^12", "x t", 12),
    ("x y x^-1 y^-1", "x y x^-1 y^-1", 1),
    ("x^4", "x", 4),
])
def test_proper_power(r, root, n):
    assert proper_power_decomposition(parse_word(r)) == (parse_word(root), n)


def test_proper_power_empty():
    with pytest.raises(ValueError):
        proper_power_decomposition(Word())


@pytest.mark.parametrize("w, out", [
    ("(x t)^12", ""),
    ("x", "x"),
    ("t^13", "t"),
    ("t^-13", "t^-1"),
    ("t^7", "t^-5"),
    ("x t^12 x^-1", ""),
])
def test_dehn_examples(w, out):
    assert dehn_reduce(S12, parse_word(w)) == parse_word(out)


def test_dehn_requires_c16():
    S = symmetrize(P("gens: x y\nrel: x y x y\nrel: x y x y^-1"))
    with pytest.raises(PreconditionFailed):
        dehn_reduce(S, parse_word("x"))
    with pytest.raises(PreconditionFailed):
        element_order(S, parse_word("x"))


@pytest.mark.parametrize("w, order", [("t", 12), ("x t", 12), ("x", INFINITE), ("", 1), ("t^6", 2), ("t^-1 x t^2", 12)])
def test_element_order(w, order):
    assert element_order(S12, parse_word(w)).order == order


def test_order_verdict_round_trip():
    v = element_order(S12, parse_word("t^3"))
    assert v.order == 4 and v.witness[1] == 12
    assert OrderVerdict.from_dict(v.to_dict()) == v


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_order_conjugacy_invariant(seed):
    rng = random.Random(seed)
    w = random_reduced_word(rng, ["x", "t"], rng.randint(1, 4))
    c = random_reduced_word(rng, ["x", "t"], rng.randint(0, 5))
    assert element_order(S12, w).order == element_order(S12, c * w * c.inverse()).order


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_dehn_kills_conjugated_relators(seed):
    rng = random.Random(seed)
    w = Word()
    for _ in range(rng.randint(1, 3)):
        r = rng.choice(PTK12.relators)
        if rng.random() < 0.5:
            r = r.inverse()
        c = random_reduced_word(rng, ["x", "t"], rng.randint(0, 5))
        w = w * c * r * c.inverse()
    assert dehn_reduce(S12, w, checked=True) == Word()


def test_rewriter_reusable():
    d = DehnRewriter(S12)
    assert d.reduce(parse_word("t^13")) == d.reduce(parse_word("t^13")) == parse_word("t")


def test_is_c16():
    assert is_c16(PTK12)
    assert not is_c16(P("gens: x y\nrel: x y x y\nrel: x y x y^-1"))
