"""Finite presentations, symmetrised closures, free products, HNN assembly
and a small deterministic Tietze simplifier.

Presentation files are line based::

    # comment
    gens: x y t
    rel: (x t)^12
    rel: t^12
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .words import (
    Alphabet,
    Letter,
    Word,
    WordError,
    cyclic_permutations,
    free_reduce,
    parse_word,
    str_cyclic_core,
    str_cyclic_key,
    str_free_reduce,
    str_inverse,
)


class PresentationError(ValueError):
    pass


class ForeignGenerator(PresentationError):
    pass


class NotCyclicallyReduced(PresentationError):
    def __init__(self, index, relator=None):
        self.index = index
        self.relator = relator
        super().__init__(f"relator {index} ({relator}) is not freely and cyclically reduced")


@dataclass(frozen=True)
class FinitePresentation:
    generators: tuple
    relators: tuple = ()

    def __post_init__(self):
        gens = tuple(self.generators)
        if len(set(gens)) != len(gens):
            raise PresentationError(f"duplicate generators in {gens}")
        rels = []
        known = set(gens)
        for i, r in enumerate(self.relators):
            if isinstance(r, str):
                r = parse_word(r)
            foreign = r.generators() - known
            if foreign:
                raise ForeignGenerator(f"relator {i} uses unknown generators {sorted(foreign)}")
            rels.append(free_reduce(r))
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", tuple(rels))

    @classmethod
    def parse(cls, text: str) -> "FinitePresentation":
        gens, rels = None, []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, rest = line.partition(":")
            key = key.strip()
            if not sep or key not in ("gens", "rel"):
                raise PresentationError(f"line {lineno}: expected 'gens:' or 'rel:', got {raw!r}")
            if key == "gens":
                if gens is not None:
                    raise PresentationError(f"line {lineno}: repeated 'gens:' line")
                gens = tuple(rest.split())
            else:
                try:
                    rels.append(parse_word(rest))
                except WordError as exc:
                    raise PresentationError(f"line {lineno}: {exc}") from None
        if gens is None:
            raise PresentationError("missing 'gens:' line")
        return cls(gens, tuple(rels))

    @classmethod
    def load(cls, path) -> "FinitePresentation":
        with open(path, encoding="utf-8") as fh:
            return cls.parse(fh.read())

    def to_text(self) -> str:
        lines = ["gens: " + " ".join(self.generators)]
        lines += [f"rel: {r}" for r in self.relators]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "generators": list(self.generators),
            "relators": [[[l.gen, l.sign] for l in r] for r in self.relators],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FinitePresentation":
        return cls(tuple(d["generators"]), tuple(Word(map(tuple, r)) for r in d["relators"]))

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.generators)

    def with_relators(self, extra: Iterable[Word]) -> "FinitePresentation":
        return FinitePresentation(self.generators, self.relators + tuple(extra))

    def __str__(self):
        rels = ", ".join(str(r) for r in self.relators) or "-"
        return f"<{', '.join(self.generators)} | {rels}>"


@dataclass(frozen=True)
class SymmetrizedView:
    base: FinitePresentation
    closure: tuple
    # owner[i] = index of the base relator whose rotation/inverse is closure[i]
    owner: tuple = field(default=(), compare=False)


def symmetrize(P: FinitePresentation) -> SymmetrizedView:
    """All cyclic permutations of relators and their inverses, deduplicated.

    Empty relators contribute nothing.
    """
    seen, closure, owner = set(), [], []
    for i, r in enumerate(P.relators):
        if not r.is_cyclically_reduced:
            raise NotCyclicallyReduced(i, r)
        if not r:
            continue
        for w in cyclic_permutations(r) + cyclic_permutations(r.inverse()):
            if w not in seen:
                seen.add(w)
                closure.append(w)
                owner.append(i)
    return SymmetrizedView(P, tuple(closure), tuple(owner))


def fresh_name(name: str, taken) -> str:
    while name in taken:
        name += "'"
    return name


def free_product(P: FinitePresentation, Q: FinitePresentation):
    """Disjoint union of presentations; returns ``(P*Q, renaming of Q's generators)``."""
    taken = set(P.generators)
    renaming = {}
    for g in Q.generators:
        new = fresh_name(g, taken)
        taken.add(new)
        renaming[g] = new
    rels = [Word(Letter(renaming[l.gen], l.sign) for l in r) for r in Q.relators]
    gens = P.generators + tuple(renaming[g] for g in Q.generators)
    return FinitePresentation(gens, P.relators + tuple(rels)), renaming


def hnn_relator(stable: str, a: Word, image: Word) -> Word:
    t = Word.gen(stable)
    return t.inverse() * a * t * image.inverse()


def assemble_hnn(base: FinitePresentation, stable: str, assoc_gens: Sequence[Word],
                 images: Sequence[Word]) -> FinitePresentation:
    """Add stable letter ``stable`` and relators ``t^-1 a t phi(a)^-1``."""
    if len(assoc_gens) != len(images):
        raise PresentationError("associated generators and images differ in length")
    if stable in base.generators:
        raise PresentationError(f"stable letter {stable!r} already a generator")
    known = set(base.generators)
    for w in list(assoc_gens) + list(images):
        if w.generators() - known:
            raise ForeignGenerator(f"{w} is not a word over the base generators")
    rels = [hnn_relator(stable, a, b) for a, b in zip(assoc_gens, images)]
    return FinitePresentation(base.generators + (stable,), base.relators + tuple(rels))


class RelatorEnumerator:
    """Replayable stream of relators.

    ``source`` is called afresh for every iteration, so two enumerations
    yield the same sequence.
    """

    def __init__(self, generators: Sequence[str], source: Callable[[], Iterable[Word]]):
        self.generators = tuple(generators)
        self._source = source

    @classmethod
    def from_list(cls, generators, relators):
        rels = tuple(relators)
        return cls(generators, lambda: iter(rels))

    def __iter__(self) -> Iterator[Word]:
        return iter(self._source())

    def take(self, n: int) -> list:
        out = []
        for w in self:
            if len(out) >= n:
                break
            out.append(w)
        return out


# --- Tietze simplification -------------------------------------------------

@dataclass(frozen=True)
class TietzeResult:
    presentation: FinitePresentation
    exhausted: bool = False
    log: tuple = ()


def _derives(u: str, v: str, budget: int):
    """Can cyclic word ``u`` be reduced to the empty word by repeatedly
    deleting cyclic occurrences of rotations of ``v`` or ``v^-1``?

    ``u`` and ``v`` must be cyclically reduced.  Depth-first, leftmost
    occurrence first.  Returns True, False, or None when more than
    ``budget`` words were expanded.
    """
    L = len(v)
    vv, vi = v + v, str_inverse(v) + str_inverse(v)
    targets = {vv[i:i + L] for i in range(L)} | {vi[i:i + L] for i in range(L)}

    def children(s):
        n = len(s)
        if n < L:
            return
        ext = s + s[:L - 1]
        for i in range(n):
            if ext[i:i + L] in targets:
                # a cyclic segment of a cyclically reduced word is freely reduced
                rest = s[i + L:] + s[:i] if i + L <= n else s[i + L - n:i]
                yield str_cyclic_core(rest)

    if not u:
        return True
    seen = {u}
    stack = [children(u)]
    nodes = 1
    while stack:
        child = next(stack[-1], None)
        if child is None:
            stack.pop()
            continue
        if not child:
            return True
        if child in seen:
            continue
        seen.add(child)
        nodes += 1
        if nodes > budget:
            return None
        stack.append(children(child))
    return False


def tietze_simplify(P: FinitePresentation, budget: int = 1000,
                    eliminate: Iterable[str] | None = None) -> TietzeResult:
    """Deterministic relator/generator deletion until a fixpoint.

    Rules, highest priority first:

    1. drop relators that freely reduce to the empty word;
    2. a single-letter relator ``g^{+-1}`` with ``g`` in ``eliminate`` (all
       generators by default) deletes ``g``, substituting the empty word;
    3. drop relators whose cyclic class (rotation and inversion) repeats an
       earlier relator's;
    4. longest first, drop a relator ``u`` that reduces to the empty word by
       deleting cyclic occurrences of one strictly shorter surviving relator
       (search capped at ``budget`` nodes per pair).

    Rule 4 deletes ``u`` exactly when some shorter relator derives it, so the
    surviving set does not depend on processing order.
    """
    alpha = P.alphabet
    gens = list(P.generators)
    elim = set(P.generators if eliminate is None else eliminate)
    rels = [alpha.to_str(r) for r in P.relators]
    log = []
    exhausted = False
    inv_char = lambda ch: chr(ord(ch) ^ 1)  # noqa: E731

    while True:
        # rule 1
        kept = [r for r in rels if r]
        if len(kept) != len(rels):
            log.append(f"rule1: dropped {len(rels) - len(kept)} trivial relator(s)")
            rels = kept
            continue
        # rule 2
        hit = None
        for r in rels:
            if len(r) == 1:
                g = alpha.from_str(r)[0].gen
                if g in elim and g in gens:
                    hit = (r, g)
                    break
        if hit is not None:
            ch, g = hit
            gone = {ch, inv_char(ch)}
            gens.remove(g)
            rels = [str_free_reduce("".join(c for c in r if c not in gone)) for r in rels]
            log.append(f"rule2: eliminated generator {g}")
            continue
        # rule 3
        keys, kept = set(), []
        for r in rels:
            k = str_cyclic_key(r)
            if k not in keys:
                keys.add(k)
                kept.append(r)
        if len(kept) != len(rels):
            log.append(f"rule3: dropped {len(rels) - len(kept)} repeated relator(s)")
            rels = kept
            continue
        # rule 4
        cores = [str_cyclic_core(r) for r in rels]
        order = sorted(range(len(rels)), key=lambda i: (-len(cores[i]), i))
        alive = [True] * len(rels)
        changed = False
        for i in order:
            for j in range(len(rels)):
                if j == i or not alive[j] or len(cores[j]) >= len(cores[i]):
                    continue
                res = _derives(cores[i], cores[j], budget)
                if res is None:
                    exhausted = True
                elif res:
                    alive[i] = False
                    changed = True
                    log.append(f"rule4: relator {alpha.from_str(rels[i])} follows from "
                               f"{alpha.from_str(rels[j])}")
                    break
        if changed:
            rels = [r for r, a in zip(rels, alive) if a]
            continue
        break

    out = FinitePresentation(tuple(gens), tuple(alpha.from_str(r) for r in rels))
    return TietzeResult(out, exhausted, tuple(log))


def relator_classes(P: FinitePresentation) -> list:
    """Sorted cyclic classes of the relators (rotation/inversion invariant)."""
    alpha = Alphabet(sorted(P.generators))
    return sorted(str_cyclic_key(alpha.to_str(r)) for r in P.relators)


def same_presentation(P: FinitePresentation, Q: FinitePresentation) -> bool:
    """Equal generator sets and equal relator multisets up to order, rotation
    and inversion."""
    if set(P.generators) != set(Q.generators):
        return False
    return relator_classes(P) == relator_classes(Q)
