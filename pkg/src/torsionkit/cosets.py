"""Todd-Coxeter coset enumeration and brute-force computations in finite
groups given by multiplication tables."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .presentations import FinitePresentation
from .torsion_ladder import TorChainReport
from .words import Letter, Word

COMPLETE = "complete"
OVERFLOW = "overflow"


class IncompleteTable(ValueError):
    pass


class TableError(ValueError):
    pass


@dataclass(frozen=True)
class CosetTable:
    generators: tuple
    # action[g][c] = coset reached from c by generator g (cosets 0..N-1, 0 = subgroup)
    action: dict = field(default_factory=dict)
    status: str = COMPLETE
    max_cosets: int = 0

    @property
    def order(self):
        """Number of cosets, or ``None`` on overflow."""
        if self.status != COMPLETE:
            return None
        if not self.action:
            return 1
        return len(next(iter(self.action.values())))

    def act(self, coset: int, w: Word) -> int:
        for l in w:
            row = self.action[l.gen]
            coset = row[coset] if l.sign > 0 else self._inverse(l.gen)[coset]
        return coset

    def _inverse(self, gen):
        cache = self.__dict__.setdefault("_inv", {})
        if gen not in cache:
            row = self.action[gen]
            inv = [0] * len(row)
            for c, d in enumerate(row):
                inv[d] = c
            cache[gen] = tuple(inv)
        return cache[gen]

    def to_dict(self) -> dict:
        return {
            "generators": list(self.generators),
            "status": self.status,
            "order": self.order,
            "max_cosets": self.max_cosets,
            "action": {g: list(r) for g, r in self.action.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CosetTable":
        return cls(tuple(d["generators"]), {g: tuple(r) for g, r in d["action"].items()},
                   d["status"], d.get("max_cosets", 0))


def enumerate_cosets(P: FinitePresentation, max_cosets: int = 100_000,
                     subgroup=()) -> CosetTable:
    """HLT enumeration of the cosets of ``subgroup`` (words) in ``P``.

    Relators are scanned in the given order and undefined entries are filled
    lowest coset first, so the outcome (including overflow) is reproducible.
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be at least 1")
    alpha = P.alphabet
    rels = [alpha.encode(r) for r in P.relators]
    sub = [alpha.encode(w) for w in subgroup]
    complete, table = _kernels.coset_enumerate(len(P.generators), rels, sub, max_cosets)
    if not complete:
        return CosetTable(P.generators, {}, OVERFLOW, max_cosets)
    action = {g: tuple(row[2 * i] for row in table) for i, g in enumerate(P.generators)}
    return CosetTable(P.generators, action, COMPLETE, max_cosets)


@dataclass(frozen=True, eq=False)
class TableGroup:
    table: np.ndarray  # table[a, b] = a * b
    identity: int = 0
    generator_images: dict = field(default_factory=dict)

    def __post_init__(self):
        T = np.asarray(self.table, dtype=np.int64)
        object.__setattr__(self, "table", T)
        n = T.shape[0]
        if T.shape != (n, n) or n == 0:
            raise TableError("table must be a nonempty square array")
        if T.min() < 0 or T.max() >= n:
            raise TableError("table entries out of range")
        e = self.identity
        ar = np.arange(n)
        if not (np.array_equal(T[e], ar) and np.array_equal(T[:, e], ar)):
            raise TableError("identity row/column mismatch")
        for row in T:
            if len(np.unique(row)) != n:
                raise TableError("rows must be permutations (inverses missing)")
        for a in range(n):
            # (a b) c == a (b c) for all b, c
            if not np.array_equal(T[T[a]], T[a][T]):
                raise TableError(f"associativity fails for a={a}")
        inv = np.empty(n, dtype=np.int64)
        r, c = np.nonzero(T == e)
        inv[r] = c
        object.__setattr__(self, "inverses", inv)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))


def to_table_group(t: CosetTable) -> TableGroup:
    """Regular representation from a complete table over the trivial
    subgroup: coset ``c`` is the element reached from coset 0 by its
    breadth-first representative word."""
    if t.status != COMPLETE:
        raise IncompleteTable("coset enumeration did not complete")
    n = t.order
    reps = {0: ()}
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for g in t.generators:
            for sign in (1, -1):
                d = t.act(c, Word._make((Letter(g, sign),)))
                if d not in reps:
                    reps[d] = reps[c] + (Letter(g, sign),)
                    queue.append(d)
    if len(reps) != n:
        raise TableError("coset table is not connected")
    table = np.empty((n, n), dtype=np.int64)
    for j in range(n):
        w = Word._make(reps[j])
        for i in range(n):
            table[i, j] = t.act(i, w)
    images = {g: int(t.action[g][0]) for g in t.generators}
    return TableGroup(table, 0, images)


def normal_closure(g: TableGroup, seeds) -> frozenset:
    """Least normal subgroup containing ``seeds``."""
    T = g.table
    gens = set()
    for s in seeds:
        # conjugacy class of s: x s x^-1
        gens.update(int(v) for v in T[T[:, s], g.inverses])
    out = {g.identity}
    frontier = [g.identity]
    gens = sorted(gens)
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                b = int(T[a, s])
                if b not in out:
                    out.add(b)
                    nxt.append(b)
        frontier = nxt
    return frozenset(out)


def _torsion_mod(g: TableGroup, N: frozenset) -> set:
    """Elements whose image in ``G/N`` has finite order; in a finite group
    this is every element, but the powers are walked anyway."""
    out = set()
    for a in range(g.order):
        x = a
        for _ in range(g.order):
            if x in N:
                out.add(a)
                break
            x = g.mul(x, a)
    return out


def tor_chain(g: TableGroup) -> TorChainReport:
    """``tor_0 = {e}``, ``tor_{i+1}`` the preimage of the normal closure of the
    torsion of ``G / tor_i``; the chain lists distinct terms and the torsion
    length is the index of the last."""
    chain = [frozenset({g.identity})]
    while True:
        N = chain[-1]
        nxt = normal_closure(g, _torsion_mod(g, N) | N)
        if nxt == N:
            return TorChainReport(tuple(chain), len(chain) - 1)
        chain.append(nxt)
