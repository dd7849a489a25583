"""The ``P_t^k`` construction, its tor_1 quotient, and ladders of iterated
constructions whose torsion length grows by one per level."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .presentations import (
    FinitePresentation,
    NotCyclicallyReduced,
    PresentationError,
    TietzeResult,
    symmetrize,
    tietze_simplify,
)
from .smallcancel import check_metric, proper_power_decomposition
from .words import Word

MIN_SAFE_K = 12
OMEGA = "omega"


class DuplicateRelator(PresentationError):
    pass


class NameClash(PresentationError):
    pass


class UnsafeExponent(ValueError):
    pass


def _check_base(P: FinitePresentation, t_name: str):
    if t_name in P.generators:
        raise NameClash(f"stable letter {t_name!r} is already a generator")
    seen = set()
    for i, r in enumerate(P.relators):
        if not r or not r.is_cyclically_reduced:
            raise NotCyclicallyReduced(i, r)
        if r in seen:
            raise DuplicateRelator(f"relator {i} ({r}) repeats an earlier relator")
        seen.add(r)


def build_ptk(P: FinitePresentation, k: int = 12, t_name: str = "t") -> FinitePresentation:
    """``<X, t | (r_1 t)^k, ..., (r_n t)^k, t^k>``."""
    if k < 1:
        raise ValueError("k must be positive")
    _check_base(P, t_name)
    t = Word.gen(t_name)
    rels = tuple((r * t) ** k for r in P.relators) + (t ** k,)
    return FinitePresentation(P.generators + (t_name,), rels)


def _quotient(level: FinitePresentation, roots, t_name, budget):
    t = Word.gen(t_name)
    extra = [r * t for r in roots] + [t]
    return tietze_simplify(level.with_relators(extra), budget=budget, eliminate={t_name})


def _check_k(k, unsafe):
    if k < MIN_SAFE_K and not unsafe:
        raise UnsafeExponent(f"the tor_1 quotient law needs k >= {MIN_SAFE_K}, got k={k}")


def tor1_quotient_ptk(P: FinitePresentation, k: int = 12, t_name: str = "t", *,
                      budget: int = 1000, unsafe_k: bool = False) -> FinitePresentation:
    """Presentation of ``P_t^k / tor_1``: add ``r_i t`` and ``t`` as relators
    and simplify, eliminating only ``t``."""
    _check_k(k, unsafe_k)
    level = build_ptk(P, k, t_name)
    return _quotient(level, P.relators, t_name, budget).presentation


def split_ptk(Q: FinitePresentation, k: int, t_name: str = "t") -> FinitePresentation:
    """Recover the base presentation from the relators of ``P_t^k``."""
    if t_name not in Q.generators:
        raise PresentationError(f"{t_name!r} is not a generator")
    t = Word.gen(t_name)
    base_rels = []
    seen_t = False
    for r in Q.relators:
        if r == t ** k:
            seen_t = True
            continue
        root, n = proper_power_decomposition(r)
        if n % k or not root or root.letters[-1] != t.letters[0]:
            raise PresentationError(f"relator {r} is not of the form (r t)^{k}")
        block = (root ** (n // k))[:-1]
        if t_name in block.generators():
            raise PresentationError(f"relator {r} is not of the form (r t)^{k}")
        base_rels.append(block)
    if not seen_t:
        raise PresentationError(f"missing relator {t_name}^{k}")
    gens = tuple(g for g in Q.generators if g != t_name)
    return FinitePresentation(gens, tuple(base_rels))


def tor1_quotient_of_level(Q: FinitePresentation, k: int = 12, t_name: str = "t", *,
                           budget: int = 1000, unsafe_k: bool = False) -> FinitePresentation:
    """tor_1 quotient of a presentation already of the form ``P_t^k``."""
    return tor1_quotient_result(Q, k, t_name, budget=budget, unsafe_k=unsafe_k).presentation


def tor1_quotient_result(Q: FinitePresentation, k: int = 12, t_name: str = "t", *,
                         budget: int = 1000, unsafe_k: bool = False) -> TietzeResult:
    """As :func:`tor1_quotient_of_level`, keeping the simplifier's log and
    whether its search budget ran out."""
    _check_k(k, unsafe_k)
    base = split_ptk(Q, k, t_name)
    return _quotient(Q, base.relators, t_name, budget)


def base_normal_form(P: FinitePresentation, budget: int = 1000) -> FinitePresentation:
    """The simplifier's normal form of ``P`` with every generator kept; the
    tor_1 quotient of ``P_t^k`` is compared against this."""
    return tietze_simplify(P, budget=budget, eliminate=()).presentation


@dataclass(frozen=True)
class LadderLevel:
    presentation: FinitePresentation
    level: int
    stable_letter: str | None
    claimed_torlen: object  # int, OMEGA, or None when the base is unknown

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "stable_letter": self.stable_letter,
            "claimed_torlen": self.claimed_torlen,
            "presentation": self.presentation.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LadderLevel":
        return cls(FinitePresentation.from_dict(d["presentation"]), d["level"],
                   d["stable_letter"], d["claimed_torlen"])


@dataclass(frozen=True)
class TorChainReport:
    """Ascending chain ``tor_0 <= tor_1 <= ...``; ``stabilized_at`` is the
    least index ``i`` with ``chain[i] == chain[i+1]`` (the torsion length),
    or ``None`` if not observed."""
    chain: tuple
    stabilized_at: int | None

    @property
    def torsion_length(self):
        return self.stabilized_at

    def to_dict(self) -> dict:
        return {"chain": [sorted(c) for c in self.chain], "stabilized_at": self.stabilized_at}

    @classmethod
    def from_dict(cls, d: dict) -> "TorChainReport":
        return cls(tuple(frozenset(c) for c in d["chain"]), d["stabilized_at"])


def _add(torlen, n):
    if torlen is None or torlen == OMEGA:
        return torlen
    return torlen + n


def _fresh_t(taken, i):
    name = f"t{i}"
    while name in taken:
        name += "'"
    return name


def build_ladder(base: FinitePresentation, n: int, k: int = 12, *, base_torlen=0,
                 unsafe_k: bool = False) -> list[LadderLevel]:
    """Levels ``0..n``, level ``i+1`` being ``P_{t_{i+1}}^k`` of level ``i``.

    ``base_torlen`` is asserted by the caller (torsion length is not
    computable in general); each level adds one.
    """
    _check_k(k, unsafe_k)
    levels = [LadderLevel(base, 0, None, base_torlen)]
    P = base
    for i in range(1, n + 1):
        t = _fresh_t(set(P.generators), i)
        P = build_ptk(P, k, t)
        levels.append(LadderLevel(P, i, t, _add(base_torlen, i)))
    return levels


@dataclass(frozen=True)
class LevelCheck:
    level: int
    metric_ok: bool
    max_ratio: Fraction
    quotient_ok: bool
    note: str = ""

    @property
    def passed(self):
        return self.metric_ok and self.quotient_ok

    def to_dict(self) -> dict:
        return {"level": self.level, "metric_ok": self.metric_ok,
                "max_ratio": str(self.max_ratio), "quotient_ok": self.quotient_ok,
                "note": self.note}


def verify_ladder(levels, k: int = 12, budget: int = 1000) -> list[LevelCheck]:
    """For every level ``i >= 1``: C'(2/k) holds and the tor_1 quotient of
    level ``i`` is level ``i-1`` (in simplifier normal form)."""
    out = []
    for prev, cur in zip(levels, levels[1:]):
        ok, report = check_metric(symmetrize(cur.presentation), Fraction(2, k))
        if k < MIN_SAFE_K:
            out.append(LevelCheck(cur.level, ok, report.global_max_ratio, False,
                                  f"k={k} < {MIN_SAFE_K}: quotient law unavailable"))
            continue
        try:
            q = tor1_quotient_of_level(cur.presentation, k, cur.stable_letter, budget=budget)
        except PresentationError as exc:
            out.append(LevelCheck(cur.level, ok, report.global_max_ratio, False, str(exc)))
            continue
        expected = base_normal_form(prev.presentation, budget)
        same = q.generators == expected.generators and q.relators == expected.relators
        out.append(LevelCheck(cur.level, ok, report.global_max_ratio, same))
    return out
