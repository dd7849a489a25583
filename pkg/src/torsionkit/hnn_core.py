"""HNN extensions given by membership oracles: pinch detection, Britton
reduction, sampled goodness checks for subgroups, and quotient extensions.

A schema describes ``H = G *_{phi_1, ..., phi_n}`` with stable letters
``t_i`` and relations ``t_i^-1 a t_i = phi_i(a)`` for ``a`` in the domain
``A_i``.  The base group ``G`` is supplied as a :class:`BaseGroup`, a small
bundle of functions on an opaque element type.  Each stable letter carries
two oracles returning an optional *decomposition* of an element of ``A_i``
(resp. ``B_i``) and two rewriters taking decompositions to images.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

from .presentations import FinitePresentation, ForeignGenerator, PresentationError, hnn_relator
from .words import EMPTY, Letter, Word, concat, free_reduce


class OracleUndecided(RuntimeError):
    """A membership oracle could not decide its input."""


@dataclass(frozen=True)
class BaseGroup:
    from_word: Callable[[Word], Any]
    multiply: Callable[[Any, Any], Any]
    is_identity: Callable[[Any], bool]
    to_word: Callable[[Any], Word]
    identity: Any = None

    def product(self, *elems):
        out = self.identity
        for e in elems:
            out = self.multiply(out, e)
        return out


FREE_BASE = BaseGroup(free_reduce, concat, lambda w: not w, lambda w: w, EMPTY)


@dataclass(frozen=True)
class StableLetter:
    name: str
    domain: Callable[[Any], Optional[Any]]
    codomain: Callable[[Any], Optional[Any]]
    forward: Callable[[Any], Any]
    backward: Callable[[Any], Any]
    # generators of the domain and their forward images (words), used for
    # the stable-letter relators of the presentation
    generators: tuple = ()
    images: tuple = ()


@dataclass(frozen=True)
class HnnSchema:
    stable: tuple
    base: BaseGroup = FREE_BASE
    presentation: Optional[FinitePresentation] = None  # of the base group

    def __post_init__(self):
        object.__setattr__(self, "stable", tuple(self.stable))
        names = [s.name for s in self.stable]
        if len(set(names)) != len(names):
            raise PresentationError(f"duplicate stable letters {names}")
        object.__setattr__(self, "_by_name", {s.name: s for s in self.stable})

    def letter(self, name: str) -> StableLetter:
        return self._by_name[name]

    def is_stable(self, gen: str) -> bool:
        return gen in self._by_name

    def hnn_presentation(self) -> FinitePresentation:
        """Base presentation plus ``t^-1 a t phi(a)^-1`` for every listed
        domain generator ``a``."""
        if self.presentation is None:
            raise PresentationError("schema has no base presentation")
        P = self.presentation
        rels = list(P.relators)
        for s in self.stable:
            rels += [hnn_relator(s.name, a, b) for a, b in zip(s.generators, s.images)]
        gens = P.generators + tuple(s.name for s in self.stable)
        return FinitePresentation(gens, tuple(rels))


@dataclass(frozen=True)
class PinchSite:
    position: tuple  # (start, end) letter indices, end exclusive
    letter: str
    direction: int  # sign of the first stable letter: -1 for t^-1 g t
    interior: Word


def _split(schema: HnnSchema, w: Word):
    """Maximal stable-free segments, stable letters, and letter positions."""
    segments, stables, positions = [[]], [], []
    for pos, l in enumerate(w.letters):
        if schema.is_stable(l.gen):
            stables.append(l)
            positions.append(pos)
            segments.append([])
        else:
            segments[-1].append(l)
    return [Word._make(tuple(s)) for s in segments], stables, positions


def _pinch_decomposition(s: StableLetter, first_sign: int, elem):
    if first_sign < 0:
        return s.domain(elem)
    return s.codomain(elem)


def find_pinch(schema: HnnSchema, w: Word) -> Optional[PinchSite]:
    """Leftmost pinch ``t^-1 g t`` (g in the domain) or ``t g t^-1`` (g in
    the codomain) with ``g`` stable-letter free; ``None`` if ``w`` is
    Britton-reduced."""
    segments, stables, positions = _split(schema, w)
    base = schema.base
    for i in range(len(stables) - 1):
        a, b = stables[i], stables[i + 1]
        if a.gen != b.gen or a.sign != -b.sign:
            continue
        g = segments[i + 1]
        if _pinch_decomposition(schema.letter(a.gen), a.sign, base.from_word(g)) is not None:
            return PinchSite((positions[i], positions[i + 1] + 1), a.gen, a.sign, g)
    return None


def britton_reduce_elems(schema: HnnSchema, w: Word):
    """Britton reduction returning ``(elements, stable letters)`` with
    ``len(elements) == len(stable letters) + 1``."""
    base = schema.base
    segments, stables, _ = _split(schema, w)
    elems = [base.from_word(segments[0])]
    out_stables: list = []
    for s, seg in zip(stables, segments[1:]):
        g = base.from_word(seg)
        if out_stables:
            top = out_stables[-1]
            if top.gen == s.gen and top.sign == -s.sign:
                letter = schema.letter(s.gen)
                dec = _pinch_decomposition(letter, top.sign, elems[-1])
                if dec is not None:
                    img = letter.forward(dec) if top.sign < 0 else letter.backward(dec)
                    out_stables.pop()
                    elems.pop()
                    elems[-1] = base.multiply(base.multiply(elems[-1], img), g)
                    continue
        out_stables.append(s)
        elems.append(g)
    return elems, out_stables


def britton_reduce(schema: HnnSchema, w: Word) -> Word:
    """Remove pinches until none remain.

    An empty result means ``w`` is trivial in ``H``.  A result with a stable
    letter is nontrivial by Britton's lemma.  A stable-free result is the
    base group's normal form (as far as ``to_word`` is canonical).
    """
    elems, stables = britton_reduce_elems(schema, w)
    letters = list(schema.base.to_word(elems[0]).letters)
    for s, e in zip(stables, elems[1:]):
        letters.append(s)
        letters.extend(schema.base.to_word(e).letters)
    return free_reduce(Word._make(tuple(letters)))


def stable_count(schema: HnnSchema, w: Word) -> int:
    return sum(1 for l in w if schema.is_stable(l.gen))


@dataclass
class SpotcheckReport:
    samples: int
    domain_hits: int = 0
    codomain_hits: int = 0
    undecided: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "domain_hits": self.domain_hits,
            "codomain_hits": self.codomain_hits,
            "undecided": self.undecided,
            "violations": [[name, d, str(w)] for name, d, w in self.violations],
        }


def good_subgroup_spotcheck(schema: HnnSchema, k_gens: Sequence[Word],
                            k_oracle: Callable[[Any], bool], samples: int = 1000, *,
                            seed: int = 0, max_len: int = 6) -> SpotcheckReport:
    """Sample random products ``g`` of ``k_gens`` and their inverses.  When
    ``g`` lies in a domain ``A_i`` its forward image must satisfy
    ``k_oracle``; likewise backwards for ``B_i``.

    A violation refutes goodness; no violations is only evidence.
    Undecided oracle calls are counted and skipped.
    """
    rng = random.Random(seed)
    base = schema.base
    report = SpotcheckReport(samples)
    gens = [g for g in k_gens] + [g.inverse() for g in k_gens]
    for _ in range(samples):
        n = rng.randint(0, max_len)
        word = concat(*(rng.choice(gens) for _ in range(n))) if gens else EMPTY
        g = base.from_word(word)
        for s in schema.stable:
            for direction, oracle, rewrite in ((+1, s.domain, s.forward), (-1, s.codomain, s.backward)):
                try:
                    dec = oracle(g)
                except OracleUndecided:
                    report.undecided += 1
                    continue
                if dec is None:
                    continue
                if direction > 0:
                    report.domain_hits += 1
                else:
                    report.codomain_hits += 1
                if not k_oracle(rewrite(dec)):
                    report.violations.append((s.name, direction, word))
    return report


def quotient_hnn(schema: HnnSchema, k_gens: Sequence[Word]) -> FinitePresentation:
    """Presentation of ``H_K = (G/K) *_{phi-bar}``: the HNN presentation with
    the generators of ``K`` added as relators."""
    H = schema.hnn_presentation()
    base_gens = set(schema.presentation.generators)
    for w in k_gens:
        foreign = w.generators() - base_gens
        if foreign:
            raise ForeignGenerator(f"{w} uses non-base generators {sorted(foreign)}")
    return H.with_relators(k_gens)


def free_hnn_schema(base: FinitePresentation, stable: str, generators: Sequence[Word],
                    images: Sequence[Word]) -> HnnSchema:
    """Schema over a free base group where the domain and codomain are free
    factors generated by single letters.

    Domain membership: the word uses only the letters of ``generators``
    (each a single generator).  Images are substituted letterwise.  Covers
    examples such as ``a -> a^2`` (Baumslag-Solitar) or identity maps.
    """
    dom = {}
    for g, img in zip(generators, images):
        if len(g) != 1 or g[0].sign != 1:
            raise PresentationError("free schema domain generators must be single letters")
        dom[g[0].gen] = img
    cod = {}
    for g, img in zip(generators, images):
        if len(img) == 1 and img[0].sign == 1:
            cod[img[0].gen] = g
        else:
            cod = None
            break

    def in_letters(table):
        def oracle(w):
            if table is None:
                raise OracleUndecided("codomain is not generated by letters")
            return w if all(l.gen in table for l in w) else None
        return oracle

    def substitute(table):
        def rewrite(w):
            letters = []
            for l in w:
                img = table[l.gen]
                letters.extend(img.letters if l.sign > 0 else img.inverse().letters)
            return free_reduce(Word._make(tuple(letters)))
        return rewrite

    if cod is None:
        # powers of single letters: a -> a^e with |e| >= 1 give a decidable codomain
        pw = {}
        for g, img in zip(generators, images):
            gens_in = img.generators()
            if len(gens_in) != 1:
                break
            e = img.exponent_sum(next(iter(gens_in)))
            if len(img) != abs(e):
                break
            pw[next(iter(gens_in))] = (g[0].gen, e)
        else:
            def cod_oracle(w):
                out = []
                i = 0
                letters = w.letters
                while i < len(letters):
                    l = letters[i]
                    if l.gen not in pw:
                        return None
                    j = i
                    while j < len(letters) and letters[j] == l:
                        j += 1
                    src, e = pw[l.gen]
                    run = (j - i) * l.sign
                    if run % e:
                        return None
                    q = run // e
                    out.extend([Letter(src, 1 if q > 0 else -1)] * abs(q))
                    i = j
                return Word._make(tuple(out))

            s = StableLetter(stable, in_letters(dom), cod_oracle, substitute(dom), lambda d: d,
                             tuple(generators), tuple(images))
            return HnnSchema((s,), FREE_BASE, base)
    s = StableLetter(stable, in_letters(dom), in_letters(cod), substitute(dom),
                     substitute(cod) if cod is not None else (lambda d: d),
                     tuple(generators), tuple(images))
    return HnnSchema((s,), FREE_BASE, base)
