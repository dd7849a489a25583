"""Truncated presentations of the three-stage embedding of a recursively
presented group ``C = <c_1..c_n | S>`` into a finitely presented group,
where ``S`` is read off the halting set of a modular machine.

Stage 1 is ``K_M * (C x <b_1..b_n>) * <d>``, stage 2 adds a stable letter
``p`` with ``p^-1 t_alpha p = t_alpha w_alpha(b) d``, and stage 3 adds
``a_1..a_2n`` and a final stable letter ``kk``.  The relator families
indexed by ``alpha`` are infinite; they are emitted for ``alpha <= alpha_max``
only.

Letters ``c_{n+i}`` and ``b_{n+i}`` stand for ``c_i^-1`` and ``b_i^-1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .hnn_core import BaseGroup, HnnSchema, OracleUndecided, StableLetter
from .km_sim import T, X, Y, km_presentation, t_rs
from .modmach import ModularMachine, decode_word, find_halting_run, index_set
from .presentations import FinitePresentation, RelatorEnumerator
from .words import EMPTY, Letter, UnknownGenerator, Word, commutator, concat, free_reduce

P_LETTER = "p"
D_LETTER = "d"
FINAL_LETTER = "kk"


def c_name(i: int) -> str:
    return f"c{i}"


def b_name(i: int) -> str:
    return f"b{i}"


def a_name(i: int) -> str:
    return f"a{i}"


def _signed(prefix: str, digit: int, n: int) -> Word:
    if digit <= n:
        return Word.gen(f"{prefix}{digit}")
    return Word.gen(f"{prefix}{digit - n}", -1)


class NotAWord(ValueError):
    pass


def build_w_alpha(alpha: int, variant: str, n: int, m: int) -> Word:
    """``w_alpha(c)``, ``w_alpha(b)`` or ``w_alpha(bc)`` (letterwise
    substitution ``c_i -> b_i c_i``)."""
    w = decode_word(alpha, n, m)
    if w is None:
        raise NotAWord(f"{alpha} has an m-ary digit outside 1..{2 * n}")
    digits = [int(l.gen[1:]) if l.sign > 0 else n + int(l.gen[1:]) for l in w]
    parts = []
    for dgt in digits:
        if variant == "c":
            parts.append(_signed("c", dgt, n))
        elif variant == "b":
            parts.append(_signed("b", dgt, n))
        elif variant == "bc":
            parts.append(_signed("b", dgt, n) * _signed("c", dgt, n))
        else:
            raise ValueError(f"unknown variant {variant!r}")
    out = EMPTY
    for p_ in parts:
        out = out * p_
    return out


@dataclass(frozen=True)
class HigmanInput:
    machine: ModularMachine
    n: int
    alpha_max: int = 100
    include_empty: bool = False  # treat alpha = 0 (the empty word) as an index
    max_steps: int = 10_000

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.machine.modulus < 2 * self.n + 1:
            raise ValueError(f"modulus {self.machine.modulus} < 2n+1 = {2 * self.n + 1}")
        if self.alpha_max < 0:
            raise ValueError("alpha_max must be nonnegative")

    @property
    def m(self) -> int:
        return self.machine.modulus

    def indices(self) -> list:
        """Truncated index set, with 0 first when ``include_empty``."""
        out = index_set(self.n, self.m, self.alpha_max)
        return ([0] if self.include_empty else []) + out

    def halts(self, alpha: int) -> bool:
        return find_halting_run(self.machine, alpha, 0, self.max_steps) is not None

    def s_relators(self) -> list:
        """``w_alpha(c)`` for halting ``(alpha, 0)``, freely reduced, empty
        ones dropped."""
        out = []
        for alpha in self.indices():
            if self.halts(alpha):
                w = free_reduce(build_w_alpha(alpha, "c", self.n, self.m))
                if w:
                    out.append(w)
        return out

    @property
    def c_relators(self) -> RelatorEnumerator:
        return RelatorEnumerator([c_name(i) for i in range(1, self.n + 1)], self.s_relators)


@dataclass(frozen=True)
class HigmanStage:
    stage: int
    presentation: FinitePresentation
    named_subsets: dict = field(default_factory=dict)
    truncation: int = 0

    def manifest(self, inp: HigmanInput) -> dict:
        gens, rels = len(self.presentation.generators), len(self.presentation.relators)
        return {
            "stage": self.stage,
            "alpha_max": self.truncation,
            "include_empty": inp.include_empty,
            "named_subsets": {k: [str(w) for w in v] for k, v in self.named_subsets.items()},
            "counts": {"generators": gens, "relators": rels},
            "count_formula": count_formula_text(self.stage),
            "formula_inputs": formula_inputs(inp),
            "final_stable_letter": FINAL_LETTER if self.stage == 3 else None,
        }


def _u_letters(M: ModularMachine) -> list:
    return [T] + list(M.stable_letters)


def _t_alpha(alpha: int) -> Word:
    return t_rs(alpha, 0)


def _psi_i_image(g: str, i: int, n: int, m: int) -> Word:
    if g == T:
        return _t_alpha(i)
    if g == X:
        return Word.gen(X, m)
    if g == D_LETTER:
        return _signed("b", i, n) * Word.gen(D_LETTER)
    return Word.gen(g)  # b_j and p are fixed


def emit_stage(inp: HigmanInput, stage: int) -> HigmanStage:
    if stage not in (1, 2, 3):
        raise ValueError("stage must be 1, 2 or 3")
    M, n, m = inp.machine, inp.n, inp.m
    K = km_presentation(M)
    cs = [c_name(i) for i in range(1, n + 1)]
    bs = [b_name(i) for i in range(1, n + 1)]
    gens = list(K.generators) + cs + bs + [D_LETTER]
    rels = list(K.relators) + inp.s_relators()
    rels += [commutator(Word.gen(c), Word.gen(b)) for c in cs for b in bs]
    U = [Word.gen(u) for u in _u_letters(M)]
    subsets = {"U": U}
    if stage >= 2:
        gens.append(P_LETTER)
        p = Word.gen(P_LETTER)
        d = Word.gen(D_LETTER)
        for alpha in inp.indices():
            ta = _t_alpha(alpha)
            image = ta * build_w_alpha(alpha, "b", n, m) * d
            rels.append(p.inverse() * ta * p * image.inverse())
    if stage >= 3:
        A = [T, X, D_LETTER] + bs + [P_LETTER]
        subsets["A"] = [Word.gen(g) for g in A]
        for i in range(1, 2 * n + 1):
            a = Word.gen(a_name(i))
            gens.append(a_name(i))
            images = [_psi_i_image(g, i, n, m) for g in A]
            subsets[f"A_{i}"] = images
            for g, img in zip(A, images):
                rels.append(a.inverse() * Word.gen(g) * a * img.inverse())
        plus = U + [Word.gen(D_LETTER)] + [Word.gen(b) for b in bs] + [Word.gen(P_LETTER)]
        minus = U + [Word.gen(D_LETTER)] + [Word.gen(b) * Word.gen(c) for b, c in zip(bs, cs)] \
            + [Word.gen(P_LETTER)]
        subsets["A_+"] = plus
        subsets["A_-"] = minus
        gens.append(FINAL_LETTER)
        k = Word.gen(FINAL_LETTER)
        for g, img in zip(plus, minus):
            rels.append(k.inverse() * g * k * img.inverse())
    return HigmanStage(stage, FinitePresentation(tuple(gens), tuple(rels)), subsets, inp.alpha_max)


# --- declared counts ----------------------------------------------------------

def formula_inputs(inp: HigmanInput) -> dict:
    return {
        "rules": len(inp.machine.rules),
        "n": inp.n,
        "indices": len(index_set(inp.n, inp.m, inp.alpha_max)),
        "s_relators": len(inp.s_relators()),
        "include_empty": int(inp.include_empty),
    }


def stage_counts(stage: int, rules: int, n: int, indices: int, s_relators: int,
                 include_empty: int = 0) -> tuple[int, int]:
    """(generators, relators) of an emitted stage.

    ``indices`` is the number of positive indices ``<= alpha_max`` and
    ``s_relators`` the number of nonempty halting ``w_alpha(c)``.
    """
    gens = 3 + rules + 2 * n + 1
    rels = 1 + 3 * rules + s_relators + n * n
    if stage >= 2:
        gens += 1
        rels += indices + include_empty
    if stage >= 3:
        gens += 2 * n + 1
        rels += 2 * n * (n + 4) + (1 + rules) + 2 + n
    return gens, rels


def count_formula_text(stage: int) -> str:
    g = "4 + R + 2n"
    r = "1 + 3R + s + n^2"
    if stage >= 2:
        g, r = "5 + R + 2n", r + " + |I| + e"
    if stage >= 3:
        g, r = "6 + R + 4n", r + " + 2n(n+4) + R + 3 + n"
    return f"generators = {g}; relators = {r}"


# --- the homomorphisms lambda and mu -------------------------------------------

_C_RE = re.compile(r"c(\d+)$")


def _is_c(gen: str, n: int) -> bool:
    mt = _C_RE.match(gen)
    return bool(mt) and 1 <= int(mt.group(1)) <= n


def map_lambda(w: Word, n: int) -> Word:
    """Delete the letters ``c_1..c_n``; every other letter is fixed."""
    return free_reduce(Word._make(tuple(l for l in w if not _is_c(l.gen, n))))


def map_mu(w: Word, n: int, h1_generators) -> Word:
    """Projection of the stage-1 group onto ``C``: keep ``c`` letters, delete
    every other stage-1 letter, reject letters outside stage 1."""
    known = set(h1_generators)
    out = []
    for l in w:
        if l.gen not in known:
            raise UnknownGenerator(f"letter {l.gen!r} is not a stage-1 generator")
        if _is_c(l.gen, n):
            out.append(l)
    return free_reduce(Word._make(tuple(out)))


# --- an instance of stage 2 with decidable oracles --------------------------------

class BlockNormalizer:
    """Normal forms in a free product of free abelian groups.

    ``blocks`` lists tuples of mutually commuting generators; every other
    generator is free.  The normal form word writes each abelian syllable
    as powers in block order.
    """

    def __init__(self, blocks):
        self.blocks = [tuple(b) for b in blocks]
        self.where = {g: (i, j) for i, b in enumerate(self.blocks) for j, g in enumerate(b)}

    def normalize(self, w: Word) -> Word:
        stack = []  # items: ("v", block, list) or ("l", Letter)
        for l in w:
            pos = self.where.get(l.gen)
            if pos is None:
                if stack and stack[-1][0] == "l" and stack[-1][1] == l.inverse():
                    stack.pop()
                else:
                    stack.append(("l", l))
                continue
            bi, j = pos
            if stack and stack[-1][0] == "v" and stack[-1][1] == bi:
                vec = list(stack[-1][2])
                vec[j] += l.sign
                if any(vec):
                    stack[-1] = ("v", bi, tuple(vec))
                else:
                    # settled items below never interact with each other, so
                    # popping exposes nothing new
                    stack.pop()
            else:
                vec = [0] * len(self.blocks[bi])
                vec[j] = l.sign
                stack.append(("v", bi, tuple(vec)))
        letters = []
        for item in stack:
            if item[0] == "l":
                letters.append(item[1])
            else:
                for g, e in zip(self.blocks[item[1]], item[2]):
                    letters.extend([Letter(g, 1 if e > 0 else -1)] * abs(e))
        return Word._make(tuple(letters))

    def base_group(self) -> BaseGroup:
        return BaseGroup(self.normalize, lambda g, h: self.normalize(g * h),
                         lambda g: not g, lambda g: g, EMPTY)


def _t_alpha_decomposition(g: Word, allowed: set) -> Optional[list]:
    """Write a normal-form word over ``x, t`` as a product of
    ``t_alpha^f = x^-alpha t^f x^alpha`` with ``alpha`` in ``allowed``."""
    if any(l.gen not in (X, T) for l in g):
        return None
    out = []
    pos = 0  # current x-exponent offset: the word so far is x^pos times t-stuff
    i = 0
    letters = g.letters
    while i < len(letters):
        l = letters[i]
        j = i
        while j < len(letters) and letters[j] == l:
            j += 1
        run = (j - i) * l.sign
        if l.gen == X:
            pos += run
        else:
            alpha = -pos
            if alpha not in allowed:
                return None
            out.append((alpha, run))
        i = j
    if pos != 0:
        return None
    return out


def h2_instance(alpha_max: int = 30, include_empty: bool = False) -> tuple[HnnSchema, HigmanInput]:
    """Stage 2 for the rule-free machine with ``n = 1`` and modulus 3, where
    ``C`` is free on ``c1`` and stage 1 is
    ``Z^2(x,y) * <t> * Z^2(c1,b1) * <d>``.

    Domain membership for ``p`` is decided exactly.  For the codomain only
    elements killed by deleting ``c1`` are decided: such an element lies in
    the codomain iff it is trivial, because the codomain avoids ``c1`` and
    deletion is injective on it.
    """
    inp = HigmanInput(ModularMachine(3, ()), 1, alpha_max, include_empty)
    stage1 = emit_stage(inp, 1).presentation
    norm = BlockNormalizer([(X, Y), (c_name(1), b_name(1))])
    base = norm.base_group()
    allowed = set(inp.indices())
    d = Word.gen(D_LETTER)

    def image(alpha):
        return _t_alpha(alpha) * build_w_alpha(alpha, "b", 1, 3) * d

    def domain(g):
        return _t_alpha_decomposition(g, allowed)

    def codomain(g):
        if norm.normalize(map_lambda(g, 1)):
            raise OracleUndecided("codomain membership only decided on the kernel of lambda")
        return [] if not g else None

    def forward(dec):
        return norm.normalize(concat(*(image(a) ** f for a, f in dec)))

    def backward(dec):
        return norm.normalize(concat(*(_t_alpha(a) ** f for a, f in dec)))

    gens = tuple(_t_alpha(a) for a in inp.indices())
    imgs = tuple(image(a) for a in inp.indices())
    letter = StableLetter(P_LETTER, domain, codomain, forward, backward, gens, imgs)
    return HnnSchema((letter,), base, stage1), inp


def c_normal_closure_oracle(n_norm: BlockNormalizer, n: int = 1):
    """Membership in the normal closure of ``c_1..c_n`` when ``C`` is free:
    the element dies after deleting the ``c`` letters."""
    return lambda g: not n_norm.normalize(map_lambda(g, n))
