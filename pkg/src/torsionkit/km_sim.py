"""Exact computation in ``K = <x, y, t | [x, y]>`` and in the HNN extension
``K_M`` built from a modular machine.

``K`` is the free product ``Z^2 * <t>``.  Elements are stored in the normal
form ``v_0 t^f_1 v_1 ... t^f_k v_k`` with ``v_i`` in ``Z^2`` (exponents of
``x`` and ``y``), nonzero ``f_i`` and nonzero interior ``v_i``.

For ``M > a >= 0`` and ``N > b >= 0`` the subgroup
``K_{a,b}^{M,N} = <t(a,b), x^M, y^N>`` is the image of the injective map
``iota: t -> t(a,b), x -> x^M, y -> y^N``, where
``t(r,s) = y^-s x^-r t x^r y^s``.  Membership is a congruence test on the
normal form and the preimage is read off directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

from .hnn_core import BaseGroup, HnnSchema, StableLetter, britton_reduce, britton_reduce_elems
from .modmach import Config, ModularMachine, RunTrace, find_halting_run
from .presentations import FinitePresentation
from .words import Letter, Word, WordError, commutator, free_reduce

X, Y, T = "x", "y", "t"
ZERO = (0, 0)


def _add(u, v):
    return (u[0] + v[0], u[1] + v[1])


@dataclass(frozen=True)
class KNormalForm:
    vecs: tuple = (ZERO,)
    texps: tuple = ()

    def __post_init__(self):
        if len(self.vecs) != len(self.texps) + 1:
            raise ValueError("need exactly one more vector than t-syllables")
        if any(f == 0 for f in self.texps):
            raise ValueError("t-exponents must be nonzero")
        if any(v == ZERO for v in self.vecs[1:-1]):
            raise ValueError("interior vectors must be nonzero")

    @property
    def is_identity(self) -> bool:
        return not self.texps and self.vecs[0] == ZERO

    @property
    def length(self) -> int:
        return len(self.texps)

    def __mul__(self, other: "KNormalForm") -> "KNormalForm":
        vecs = list(self.vecs)
        texps = list(self.texps)
        ov, ot = list(other.vecs), list(other.texps)
        j = 0  # cancellation pointer into other
        vecs[-1] = _add(vecs[-1], ov[0])
        while texps and j < len(ot) and vecs[-1] == ZERO:
            f = texps[-1] + ot[j]
            if f:
                # t-powers merge; the junction vector disappears
                vecs.pop()
                texps[-1] = f
                vecs.append(ov[j + 1])
                j += 1
                return KNormalForm(tuple(vecs) + tuple(ov[j + 1:]), tuple(texps) + tuple(ot[j:]))
            texps.pop()
            vecs.pop()
            j += 1
            vecs[-1] = _add(vecs[-1], ov[j])
        return KNormalForm(tuple(vecs) + tuple(ov[j + 1:]), tuple(texps) + tuple(ot[j:]))

    def inverse(self) -> "KNormalForm":
        return KNormalForm(tuple((-a, -b) for a, b in reversed(self.vecs)),
                           tuple(-f for f in reversed(self.texps)))

    def vector_sum(self):
        s = ZERO
        for v in self.vecs:
            s = _add(s, v)
        return s

    def to_word(self) -> Word:
        letters = []

        def vec(v):
            a, b = v
            letters.extend([Letter(X, 1 if a > 0 else -1)] * abs(a))
            letters.extend([Letter(Y, 1 if b > 0 else -1)] * abs(b))

        vec(self.vecs[0])
        for f, v in zip(self.texps, self.vecs[1:]):
            letters.extend([Letter(T, 1 if f > 0 else -1)] * abs(f))
            vec(v)
        return Word._make(tuple(letters))

    def __str__(self):
        return str(self.to_word())

    def to_dict(self) -> dict:
        return {"vecs": [list(v) for v in self.vecs], "texps": list(self.texps)}

    @classmethod
    def from_dict(cls, d: dict) -> "KNormalForm":
        return cls(tuple(tuple(v) for v in d["vecs"]), tuple(d["texps"]))


IDENTITY = KNormalForm()


def k_normalize(w: Word) -> KNormalForm:
    """Normal form of a word over ``x, y, t``."""
    vecs, texps = [ZERO], []
    for l in w:
        if l.gen == X:
            vecs[-1] = (vecs[-1][0] + l.sign, vecs[-1][1])
        elif l.gen == Y:
            vecs[-1] = (vecs[-1][0], vecs[-1][1] + l.sign)
        elif l.gen == T:
            if texps and vecs[-1] == ZERO:
                vecs.pop()
                f = texps.pop() + l.sign
                if f:
                    texps.append(f)
                    vecs.append(ZERO)
                # else: t t^-1 cancelled, vecs[-1] already the accumulating vector
            else:
                texps.append(l.sign)
                vecs.append(ZERO)
        else:
            raise WordError(f"letter {l.gen!r} is not in K = <x, y, t>")
    # a vector that returns to zero before the next t merges the t-powers
    # above, so interior vectors are nonzero here
    return KNormalForm(tuple(vecs), tuple(texps))


def t_rs(r: int, s: int) -> Word:
    """``t(r, s) = y^-s x^-r t x^r y^s``."""
    y, x = Word.gen(Y, -s), Word.gen(X, -r)
    return y * x * Word.gen(T) * x.inverse() * y.inverse()


def t_rs_form(r: int, s: int) -> KNormalForm:
    return KNormalForm(((-r, -s), (r, s)), (1,))


def member_T(g: KNormalForm) -> bool:
    """Membership in the normal closure of ``t``."""
    return g.vector_sum() == ZERO


class SubgroupSpec(NamedTuple):
    a: int
    b: int
    M: int
    N: int

    def check(self):
        if not (self.M > self.a >= 0 and self.N > self.b >= 0):
            raise ValueError(f"need M > a >= 0 and N > b >= 0, got {tuple(self)}")
        return self


def member_Kab(g: KNormalForm, S: SubgroupSpec) -> Optional[KNormalForm]:
    """Preimage of ``g`` under ``iota_S`` if ``g`` lies in ``K_{a,b}^{M,N}``."""
    a, b, M, N = S
    vecs = g.vecs
    k = len(g.texps)

    def div(v):
        if v[0] % M or v[1] % N:
            return None
        return (v[0] // M, v[1] // N)

    if k == 0:
        u = div(vecs[0])
        return None if u is None else KNormalForm((u,))
    first = div((vecs[0][0] + a, vecs[0][1] + b))
    last = div((vecs[-1][0] - a, vecs[-1][1] - b))
    if first is None or last is None:
        return None
    mid = []
    for v in vecs[1:-1]:
        u = div(v)
        if u is None:
            return None
        mid.append(u)
    return KNormalForm((first, *mid, last), g.texps)


def embed(pre: KNormalForm, S: SubgroupSpec) -> KNormalForm:
    """``iota_S(pre)``: ``t -> t(a,b)``, ``x -> x^M``, ``y -> y^N``."""
    a, b, M, N = S
    vecs = [(u[0] * M, u[1] * N) for u in pre.vecs]
    if pre.texps:
        vecs[0] = (vecs[0][0] - a, vecs[0][1] - b)
        vecs[-1] = (vecs[-1][0] + a, vecs[-1][1] + b)
    return KNormalForm(tuple(vecs), pre.texps)


def iso_rewrite(pre: KNormalForm, source: SubgroupSpec, target: SubgroupSpec) -> Word:
    """Image under ``iota_target o iota_source^-1`` of the element whose
    ``source`` preimage is ``pre`` (as returned by :func:`member_Kab`)."""
    return embed(pre, target).to_word()


# --- the group K_M ----------------------------------------------------------

K_BASE = BaseGroup(
    from_word=k_normalize,
    multiply=lambda g, h: g * h,
    is_identity=lambda g: g.is_identity,
    to_word=lambda g: g.to_word(),
    identity=IDENTITY,
)

K_PRESENTATION = FinitePresentation((X, Y, T), (commutator(Word.gen(X), Word.gen(Y)),))


def rule_specs(M: ModularMachine, index: int) -> tuple[SubgroupSpec, SubgroupSpec]:
    """Domain and codomain subgroups of the isomorphism for rule ``index``."""
    m = M.modulus
    a, b, c, d = M.rules[index]
    dom = SubgroupSpec(a, b, m, m)
    cod = SubgroupSpec(c, 0, m * m, 1) if d == "R" else SubgroupSpec(0, c, 1, m * m)
    return dom, cod


def _stable_letter(M: ModularMachine, index: int) -> StableLetter:
    dom, cod = rule_specs(M, index)
    gens = (t_rs(dom.a, dom.b), Word.gen(X, dom.M), Word.gen(Y, dom.N))
    images = (t_rs(cod.a, cod.b), Word.gen(X, cod.M), Word.gen(Y, cod.N))
    return StableLetter(
        name=M.stable_letter(index),
        domain=lambda g: member_Kab(g, dom),
        codomain=lambda g: member_Kab(g, cod),
        forward=lambda pre: embed(pre, cod),
        backward=lambda pre: embed(pre, dom),
        generators=gens,
        images=images,
    )


def km_schema(M: ModularMachine) -> HnnSchema:
    return HnnSchema(tuple(_stable_letter(M, i) for i in range(len(M.rules))),
                     K_BASE, K_PRESENTATION)


def km_presentation(M: ModularMachine) -> FinitePresentation:
    """``<x, y, t, stable letters | [x,y], r^-1 g r phi(g)^-1 ...>`` with
    three relators per rule (on ``t(a,b)``, ``x^m`` and ``y^m``)."""
    return km_schema(M).hnn_presentation()


def km_britton_reduce(M: ModularMachine, w: Word, schema: HnnSchema | None = None) -> Word:
    """Britton-reduced form of ``w`` in ``K_M``; empty iff ``w`` is trivial."""
    return britton_reduce(schema or km_schema(M), w)


def km_is_trivial(schema: HnnSchema, w: Word) -> bool:
    elems, stables = britton_reduce_elems(schema, w)
    return not stables and elems[0].is_identity


@dataclass(frozen=True)
class HaltCertificate:
    config: Config
    stable_word: Word
    trace: RunTrace

    def to_dict(self) -> dict:
        return {"config": list(self.config), "stable_word": str(self.stable_word),
                "trace": self.trace.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "HaltCertificate":
        from .words import parse_word
        return cls(Config(*d["config"]), parse_word(d["stable_word"]),
                   RunTrace.from_dict(d["trace"]))


def certificate_identity(cert_word: Word, alpha: int, beta: int) -> Word:
    """``W t W^-1 t(alpha, beta)^-1``, trivial in ``K_M`` for a valid
    certificate."""
    return cert_word * Word.gen(T) * cert_word.inverse() * t_rs(alpha, beta).inverse()


def verify_certificate(M: ModularMachine, cert: HaltCertificate,
                       schema: HnnSchema | None = None) -> bool:
    alpha, beta = cert.config
    return km_is_trivial(schema or km_schema(M), certificate_identity(cert.stable_word, alpha, beta))


def certify_halting(M: ModularMachine, alpha: int, beta: int, max_steps: int) -> Optional[HaltCertificate]:
    """Certificate ``W`` with ``W t W^-1 = t(alpha, beta)`` in ``K_M`` from a
    halting run; ``None`` if no run is found within ``max_steps``.

    Each step ``cur -> nxt`` by rule ``s`` gives ``s^-1 t(cur) s = t(nxt)``,
    so ``W`` lists the rules' stable letters in run order.
    """
    trace = find_halting_run(M, alpha, beta, max_steps)
    if trace is None:
        return None
    W = Word(Letter(M.stable_letter(i), 1) for i in trace.rule_indices)
    cert = HaltCertificate(Config(alpha, beta), W, trace)
    if not verify_certificate(M, cert):
        raise AssertionError(f"certificate for {(alpha, beta)} failed to verify")
    return cert


def emit_gm_schema(M: ModularMachine, q_name: str = "q") -> tuple[FinitePresentation, dict]:
    """``K_M``'s presentation plus a letter ``q`` commuting with ``t`` and
    every rule letter; the annotation records the centralised generators."""
    P = km_presentation(M)
    q = Word.gen(q_name)
    fixed = (T,) + M.stable_letters
    rels = [commutator(q, Word.gen(g)) for g in fixed]
    out = FinitePresentation(P.generators + (q_name,), P.relators + tuple(rels))
    return out, {"stable_letter": q_name, "centralizes": list(fixed)}


def gm_counts(n_right: int, n_left: int) -> tuple[int, int]:
    """(generators, relators) of the emitted ``G_M`` presentation."""
    r = n_right + n_left
    return 3 + r + 1, 1 + 3 * r + (1 + r)


def k_word(g) -> Word:
    """Word for a normal form or pass a word through free reduction."""
    if isinstance(g, KNormalForm):
        return g.to_word()
    return free_reduce(g)
