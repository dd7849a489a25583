import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import certified_nonmember, flat_from_word, flat_to_parts, random_word, subgroup_ball
from torsionkit.km_sim import (
    IDENTITY,
    HaltCertificate,
    KNormalForm,
    SubgroupSpec,
    certificate_identity,
    certify_halting,
    embed,
    emit_gm_schema,
    gm_counts,
    iso_rewrite,
    k_normalize,
    km_britton_reduce,
    km_is_trivial,
    km_presentation,
    km_schema,
    member_Kab,
    member_T,
    rule_specs,
    t_rs,
    t_rs_form,
    verify_certificate,
)
from torsionkit.modmach import ModularMachine
from torsionkit.words import Word, WordError, parse_word

W = parse_word
FIXTURE = ModularMachine(3, ((1, 0, 2, "R"), (0, 1, 5, "L")))
seeds = st.integers(0, 10**6)


def kw(rng, n):
    return random_word(rng, ["x", "y", "t"], n)


@pytest.mark.parametrize("w, vecs, texps", [
    ("", ((0, 0),), ()),
    ("y x y^-1 x^2", ((3, 0),), ()),
    ("x t t^-1 y", ((1, 1),), ()),
    ("t x t", ((0, 0), (1, 0), (0, 0)), (1, 1)),
    ("t x x^-1 t", ((0, 0), (0, 0)), (2,)),
    ("y^-2 x^-1 t x y^2", ((-1, -2), (1, 2)), (1,)),
])
def test_normalize_examples(w, vecs, texps):
    assert k_normalize(W(w)) == KNormalForm(vecs, texps)


def test_normalize_rejects_foreign():
    with pytest.raises(WordError):
        k_normalize(W("x z"))


@pytest.mark.parametrize("vecs, texps", [
    (((0, 0), (0, 0)), ()),
    (((0, 0), (0, 0)), (0,)),
    (((1, 0), (0, 0), (1, 0)), (1, 1)),
])
def test_normal_form_validation(vecs, texps):
    with pytest.raises(ValueError):
        KNormalForm(vecs, texps)


@settings(max_examples=300)
@given(seeds)
def test_normalize_matches_flat_oracle(seed):
    rng = random.Random(seed)
    w = kw(rng, rng.randint(0, 20))
    g = k_normalize(w)
    assert (g.vecs, g.texps) == flat_to_parts(flat_from_word(w))
    assert k_normalize(g.to_word()) == g


@settings(max_examples=300)
@given(seeds)
def test_homomorphism(seed):
    rng = random.Random(seed)
    u, v = kw(rng, rng.randint(0, 12)), kw(rng, rng.randint(0, 12))
    g, h = k_normalize(u), k_normalize(v)
    assert g * h == k_normalize(u * v)
    assert (g * g.inverse()).is_identity
    assert g * IDENTITY == g == IDENTITY * g


def test_t_rs():
    assert t_rs(2, 1) == W("y^-1 x^-2 t x^2 y")
    assert k_normalize(t_rs(2, 1)) == t_rs_form(2, 1)


def test_member_T():
    assert member_T(k_normalize(W("x t x^-1 t^3")))
    assert not member_T(k_normalize(W("x t")))


@pytest.mark.parametrize("w, spec, pre", [
    ("x^3", (1, 0, 3, 3), "x"),
    ("x^2", (1, 0, 3, 3), None),
    ("y^-1 x^-2 t x^2 y", (2, 1, 3, 3), "t"),
    ("x^-1 t x", (1, 0, 3, 3), "t"),
    ("x^-1 t x^4", (1, 0, 3, 3), "t x"),
    ("x^-1 t x^2", (1, 0, 3, 3), None),
    ("t", (0, 0, 1, 1), "t"),
    ("x^-2 t x^2", (2, 0, 9, 1), "t"),
])
def test_member_Kab_examples(w, spec, pre):
    S = SubgroupSpec(*spec)
    got = member_Kab(k_normalize(W(w)), S)
    if pre is None:
        assert got is None
    else:
        assert got == k_normalize(W(pre))
        assert embed(got, S) == k_normalize(W(w))


def test_subgroup_spec_check():
    assert SubgroupSpec(1, 0, 3, 3).check() == (1, 0, 3, 3)
    with pytest.raises(ValueError):
        SubgroupSpec(3, 0, 3, 3).check()


@pytest.mark.parametrize("spec", [(0, 0, 2, 2), (1, 1, 2, 3), (2, 0, 3, 1)])
def test_member_Kab_against_ball(spec):
    S = SubgroupSpec(*spec)
    for g in subgroup_ball(*spec, radius=4):
        vecs, texps = flat_to_parts(g)
        assert member_Kab(KNormalForm(vecs, texps), S) is not None
    rng = random.Random(11)
    rejected = 0
    while rejected < 200:
        w = kw(rng, rng.randint(1, 10))
        if certified_nonmember(w, *spec):
            assert member_Kab(k_normalize(w), S) is None
            rejected += 1


@settings(max_examples=200)
@given(seeds)
def test_embed_round_trip(seed):
    rng = random.Random(seed)
    S = SubgroupSpec(rng.randrange(3), rng.randrange(2), 3, 2)
    pre = k_normalize(kw(rng, rng.randint(0, 10)))
    assert member_Kab(embed(pre, S), S) == pre


def test_iso_rewrite():
    dom, cod = rule_specs(FIXTURE, 0)
    assert (dom, cod) == ((1, 0, 3, 3), (2, 0, 9, 1))
    pre = member_Kab(k_normalize(t_rs(4, 3)), dom)
    assert k_normalize(iso_rewrite(pre, dom, cod)) == k_normalize(t_rs(11, 1))
    assert rule_specs(FIXTURE, 1) == ((0, 1, 3, 3), (0, 5, 1, 9))


@pytest.mark.parametrize("i", [0, 1])
def test_rule_identities(i):
    schema = km_schema(FIXTURE)
    s = Word.gen(FIXTURE.stable_letter(i))
    a, b, c, d = FIXTURE.rules[i]
    for u in range(-3, 4):
        for v in range(-3, 4):
            src = (3 * u + a, 3 * v + b)
            dst = (9 * u + c, v) if d == "R" else (u, 9 * v + c)
            w = s.inverse() * t_rs(*src) * s * t_rs(*dst).inverse()
            assert km_britton_reduce(FIXTURE, w, schema) == Word()


def test_britton_examples():
    schema = km_schema(FIXTURE)
    # t is in neither subgroup for this machine, so the pinch stays
    assert km_britton_reduce(FIXTURE, W("r1^-1 t r1"), schema) == W("r1^-1 t r1")
    assert km_britton_reduce(FIXTURE, W("r1^-1 x^3 r1"), schema) == W("x^9")
    assert km_britton_reduce(FIXTURE, W("r1 y r1^-1"), schema) == W("y^3")
    assert km_britton_reduce(FIXTURE, W("l2 x r1"), schema) == W("l2 x r1")
    assert not km_is_trivial(schema, W("r1^-1 t r1 t^-1"))


def test_presentation_shape():
    P = km_presentation(FIXTURE)
    assert P.generators == ("x", "y", "t", "r1", "l2")
    assert len(P.relators) == 1 + 3 * 2
    assert W("r1^-1 x^3 r1 x^-9") in P.relators


def test_certificate_one_step():
    M = ModularMachine(2, ((1, 0, 0, "R"),))
    cert = certify_halting(M, 1, 0, 10)
    assert cert.stable_word == W("r1")
    assert verify_certificate(M, cert)
    assert km_britton_reduce(M, certificate_identity(cert.stable_word, 1, 0)) == Word()
    assert HaltCertificate.from_dict(cert.to_dict()) == cert


def test_certificate_longer_run():
    M = ModularMachine(2, ((1, 0, 0, "R"), (0, 1, 2, "L"), (1, 1, 1, "R")))
    for a in range(8):
        for b in range(8):
            cert = certify_halting(M, a, b, 6)
            if cert is not None:
                assert len(cert.stable_word) == len(cert.trace.rule_indices)
                assert verify_certificate(M, cert)


def test_no_certificate_for_stuck_config():
    M = ModularMachine(2, ((1, 0, 0, "R"),))
    assert certify_halting(M, 3, 0, 10) is None
    forged = HaltCertificate((3, 0), W("r1"), None)
    assert not verify_certificate(M, forged)


def test_trivial_certificate():
    cert = certify_halting(FIXTURE, 0, 0, 5)
    assert cert.stable_word == Word() and verify_certificate(FIXTURE, cert)


@pytest.mark.parametrize("rules, counts", [
    ((), (4, 2)),
    (((1, 0, 0, "R"),), (5, 6)),
    (((1, 0, 2, "R"), (0, 1, 5, "L")), (6, 10)),
])
def test_gm_schema(rules, counts):
    M = ModularMachine(3, rules)
    P, note = emit_gm_schema(M)
    assert (len(P.generators), len(P.relators)) == counts
    n_r = sum(1 for r in M.rules if r.direction == "R")
    assert gm_counts(n_r, len(M.rules) - n_r) == counts
    assert note["centralizes"] == ["t", *M.stable_letters]


def test_gm_schema_rule_free():
    P, _ = emit_gm_schema(ModularMachine(3))
    assert P == P.parse("gens: x y t q\nrel: x y x^-1 y^-1\nrel: q t q^-1 t^-1")
