"""Pieces, the C'(lambda) metric condition, Dehn's algorithm and element
orders in C'(1/6) presentations.

All ratios are exact :class:`fractions.Fraction` values.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import _kernels
from .presentations import FinitePresentation, SymmetrizedView, symmetrize
from .words import Word, free_reduce, parse_word, str_free_reduce, str_inverse

INFINITE = "infinite"
ONE_SIXTH = Fraction(1, 6)


class PreconditionFailed(ValueError):
    pass


@dataclass(frozen=True)
class PieceReport:
    pieces: frozenset
    # relator index -> (longest piece length, relator length, ratio)
    per_relator_max: dict = field(default_factory=dict)
    global_max_ratio: Fraction = Fraction(0)

    def to_dict(self) -> dict:
        return {
            "pieces": sorted([[l.gen, l.sign] for l in p] for p in self.pieces),
            "per_relator_max": {
                str(i): [n, m, str(q)] for i, (n, m, q) in sorted(self.per_relator_max.items())
            },
            "global_max_ratio": str(self.global_max_ratio),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PieceReport":
        return cls(
            frozenset(Word(map(tuple, p)) for p in d["pieces"]),
            {int(i): (n, m, Fraction(q)) for i, (n, m, q) in d["per_relator_max"].items()},
            Fraction(d["global_max_ratio"]),
        )


def enumerate_pieces(S: SymmetrizedView) -> PieceReport:
    """Every maximal common initial segment of two distinct closure members,
    with the largest ratio ``|piece| / |r|`` over relators ``r`` containing
    the piece as a (cyclic) subword."""
    alpha = S.base.alphabet
    codes = [alpha.encode(w) for w in S.closure]
    pieces = _kernels.pieces(codes)
    per_relator = {}
    best = Fraction(0)
    if pieces:
        piece_strs = sorted(("".join(chr(0x100 + c) for c in p) for p in pieces),
                            key=lambda s: (-len(s), s))
        for i, r in enumerate(S.base.relators):
            if not r:
                continue
            s = alpha.to_str(r)
            n = len(s)
            hay = (s * 2, str_inverse(s) * 2)
            longest = 0
            for p in piece_strs:
                if len(p) <= longest:
                    break
                if len(p) <= n and (p in hay[0] or p in hay[1]):
                    longest = len(p)
            if longest:
                q = Fraction(longest, n)
                per_relator[i] = (longest, n, q)
                best = max(best, q)
    return PieceReport(frozenset(alpha.decode(p) for p in pieces), per_relator, best)


def check_metric(S: SymmetrizedView, lam) -> tuple[bool, PieceReport]:
    """C'(lam): every piece in a relator r is strictly shorter than lam*|r|."""
    lam = Fraction(lam)
    if not 0 < lam < 1:
        raise ValueError("lambda must lie strictly between 0 and 1")
    report = enumerate_pieces(S)
    return report.global_max_ratio < lam, report


def proper_power_decomposition(r: Word) -> tuple[Word, int]:
    """Primitive root ``s`` and maximal ``n`` with ``s^n == r``."""
    n = len(r)
    if n == 0:
        raise ValueError("the empty word has no root")
    letters = r.letters
    for d in range(1, n + 1):
        if n % d == 0 and letters[:d] * (n // d) == letters:
            return Word(letters[:d]), n // d
    raise AssertionError("unreachable")


class DehnRewriter:
    """Dehn's algorithm for one symmetrised presentation.

    A replacement picks the leftmost position where some closure member
    ``r = u v`` has ``|u| > |r|/2`` matching the word; among those the
    shortest ``r``, then the lexicographically least (by letter code) wins,
    and ``u`` is the longest matching prefix.  ``u`` becomes ``v^-1``.
    """

    def __init__(self, S: SymmetrizedView):
        self.S = S
        self.alpha = S.base.alphabet
        members = sorted((self.alpha.to_str(w) for w in S.closure), key=lambda s: (len(s), s))
        self.by_key = {}
        lengths = set()
        for s in members:
            h = len(s) // 2 + 1
            lengths.add(h)
            self.by_key.setdefault(s[:h], []).append(s)
        self.key_lengths = sorted(lengths)
        self.max_len = max((len(s) for s in members), default=0)

    def _match_at(self, w: str, i: int):
        best = None
        for h in self.key_lengths:
            if i + h > len(w):
                break
            cands = self.by_key.get(w[i:i + h])
            if not cands:
                continue
            for r in cands:
                n = min(len(r), len(w) - i)
                k = h
                while k < n and w[i + k] == r[k]:
                    k += 1
                key = (len(r), r)
                if best is None or key < best[0]:
                    best = (key, r, k)
                break  # candidates are sorted; first is best for this key
        if best is None:
            return None
        _, r, k = best
        return r, k

    def reduce_str(self, w: str) -> str:
        w = str_free_reduce(w)
        start = 0
        while True:
            hit = None
            for i in range(start, len(w)):
                m = self._match_at(w, i)
                if m is not None:
                    hit = (i, m)
                    break
            if hit is None:
                return w
            i, (r, k) = hit
            new = str_free_reduce(w[:i] + str_inverse(r[k:]) + w[i + k:])
            # no match started left of i before; only ones reaching the edited part are new
            start = max(0, len(os.path.commonprefix([w, new])) - self.max_len)
            w = new

    def reduce(self, w: Word) -> Word:
        return self.alpha.from_str(self.reduce_str(self.alpha.to_str(w)))


def _require_c16(S: SymmetrizedView):
    ok, report = check_metric(S, ONE_SIXTH)
    if not ok:
        raise PreconditionFailed(
            f"presentation fails C'(1/6): max piece ratio {report.global_max_ratio}")


def dehn_reduce(S: SymmetrizedView, w: Word, *, checked: bool = False) -> Word:
    """Dehn reduction; the result is empty iff ``w`` is trivial."""
    if not checked:
        _require_c16(S)
    return DehnRewriter(S).reduce(w)


@dataclass(frozen=True)
class OrderVerdict:
    element: Word
    order: object  # int or INFINITE
    witness: Optional[tuple] = None  # (relator, exponent)

    def to_dict(self) -> dict:
        d = {"element": str(self.element), "order": self.order}
        if self.witness is not None:
            d["witness"] = {"relator": str(self.witness[0]), "exponent": self.witness[1]}
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "OrderVerdict":
        w = d.get("witness")
        wit = (parse_word(w["relator"]), w["exponent"]) if w else None
        return cls(parse_word(d["element"]), d["order"], wit)


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def element_order(S: SymmetrizedView, w: Word, *, checked: bool = False) -> OrderVerdict:
    """Order of ``w``: the least candidate ``d`` (a divisor of some relator's
    power exponent) with ``w^d`` trivial, else infinite.

    In a C'(1/6) group torsion elements are conjugate to roots of relators,
    so these candidates are exhaustive.
    """
    if not checked:
        _require_c16(S)
    dehn = DehnRewriter(S)
    exps = {}
    for r in S.base.relators:
        if r:
            _, n = proper_power_decomposition(r)
            exps.setdefault(n, r)
    candidates = sorted({d for n in exps for d in _divisors(n)} | {1})
    s = dehn.alpha.to_str(free_reduce(w))
    for d in candidates:
        if not dehn.reduce_str(s * d):
            if d == 1:
                return OrderVerdict(w, 1)
            n, r = next((n, r) for n, r in sorted(exps.items()) if n % d == 0)
            return OrderVerdict(w, d, (r, n))
    return OrderVerdict(w, INFINITE)


def is_c16(P: FinitePresentation) -> bool:
    return check_metric(symmetrize(P), ONE_SIXTH)[0]
