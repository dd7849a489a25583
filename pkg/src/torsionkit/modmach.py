"""Modular machines and the m-ary encoding of words.

Machine files::

    modulus 3
    rule 1 0 2 R
    rule 0 1 5 L

A rule ``(a, b, c, R)`` applies to ``(alpha, beta)`` when ``alpha = u*m + a``
and ``beta = v*m + b``, giving ``(u*m^2 + c, v)``; an ``L`` rule gives
``(u, v*m^2 + c)``.  This is the action of the group isomorphisms
``K_{a,b}^{m,m} -> K_{c,0}^{m^2,1}`` and ``K_{a,b}^{m,m} -> K_{0,c}^{1,m^2}``
on the letters ``t(alpha, beta)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .words import Letter, Word


class MachineError(ValueError):
    pass


class ModulusTooSmall(ValueError):
    pass


class Rule(NamedTuple):
    a: int
    b: int
    c: int
    direction: str  # "R" or "L"


class Config(NamedTuple):
    alpha: int
    beta: int


@dataclass(frozen=True)
class ModularMachine:
    modulus: int
    rules: tuple = ()

    def __post_init__(self):
        m = self.modulus
        if m < 2:
            raise MachineError("modulus must be at least 2")
        rules = tuple(Rule(*r) for r in self.rules)
        for i, (a, b, c, d) in enumerate(rules, 1):
            if not (0 <= a < m and 0 <= b < m and 0 <= c < m * m):
                raise MachineError(f"rule {i} ({a} {b} {c} {d}) out of range for modulus {m}")
            if d not in ("R", "L"):
                raise MachineError(f"rule {i}: direction must be R or L, got {d!r}")
        object.__setattr__(self, "rules", rules)

    @classmethod
    def parse(cls, text: str) -> "ModularMachine":
        modulus, rules = None, []
        for lineno, raw in enumerate(text.splitlines(), 1):
            parts = raw.split("#", 1)[0].split()
            if not parts:
                continue
            try:
                if parts[0] == "modulus" and len(parts) == 2:
                    modulus = int(parts[1])
                elif parts[0] == "rule" and len(parts) == 5:
                    rules.append(Rule(int(parts[1]), int(parts[2]), int(parts[3]), parts[4]))
                else:
                    raise MachineError(f"line {lineno}: cannot parse {raw!r}")
            except ValueError as exc:
                if isinstance(exc, MachineError):
                    raise
                raise MachineError(f"line {lineno}: {exc}") from None
        if modulus is None:
            raise MachineError("missing 'modulus' line")
        return cls(modulus, tuple(rules))

    @classmethod
    def load(cls, path) -> "ModularMachine":
        with open(path, encoding="utf-8") as fh:
            return cls.parse(fh.read())

    def to_text(self) -> str:
        lines = [f"modulus {self.modulus}"]
        lines += [f"rule {r.a} {r.b} {r.c} {r.direction}" for r in self.rules]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"modulus": self.modulus, "rules": [list(r) for r in self.rules]}

    @classmethod
    def from_dict(cls, d: dict) -> "ModularMachine":
        return cls(d["modulus"], tuple(Rule(*r) for r in d["rules"]))

    def stable_letter(self, index: int) -> str:
        """Name of the stable letter for rule ``index`` (0-based): ``r<i>``
        or ``l<i>`` with ``i`` the 1-based rule number."""
        return ("r" if self.rules[index].direction == "R" else "l") + str(index + 1)

    @property
    def stable_letters(self) -> tuple:
        return tuple(self.stable_letter(i) for i in range(len(self.rules)))


def apply_rule(m: int, rule: Rule, cfg: Config) -> Config:
    u, v = cfg.alpha // m, cfg.beta // m
    if rule.direction == "R":
        return Config(u * m * m + rule.c, v)
    return Config(u, v * m * m + rule.c)


def step(M: ModularMachine, cfg) -> tuple:
    """All ``(successor, rule index)`` pairs; empty when no rule applies."""
    cfg = Config(*cfg)
    m = M.modulus
    ra, rb = cfg.alpha % m, cfg.beta % m
    return tuple(
        (apply_rule(m, rule, cfg), i)
        for i, rule in enumerate(M.rules)
        if rule.a == ra and rule.b == rb
    )


@dataclass(frozen=True)
class RunTrace:
    configs: tuple
    rule_indices: tuple

    @property
    def final(self) -> Config:
        return self.configs[-1]

    @property
    def halted(self) -> bool:
        return self.configs[-1] == (0, 0)

    def to_dict(self) -> dict:
        return {"configs": [list(c) for c in self.configs], "rule_indices": list(self.rule_indices)}

    @classmethod
    def from_dict(cls, d: dict) -> "RunTrace":
        return cls(tuple(Config(*c) for c in d["configs"]), tuple(d["rule_indices"]))


def run(M: ModularMachine, alpha: int, beta: int, max_steps: int) -> RunTrace:
    """Follow the lowest-numbered applicable rule until ``(0, 0)``, a stuck
    configuration, or ``max_steps`` steps."""
    cfg = Config(alpha, beta)
    configs, rules = [cfg], []
    for _ in range(max_steps):
        if cfg == (0, 0):
            break
        succ = step(M, cfg)
        if not succ:
            break
        cfg, i = succ[0]
        configs.append(cfg)
        rules.append(i)
    return RunTrace(tuple(configs), tuple(rules))


def find_halting_run(M: ModularMachine, alpha: int, beta: int, max_steps: int) -> RunTrace | None:
    """Shortest run from ``(alpha, beta)`` to ``(0, 0)`` within ``max_steps``
    (breadth first over the nondeterministic step relation)."""
    start = Config(alpha, beta)
    if start == (0, 0):
        return RunTrace((start,), ())
    parent = {start: None}
    frontier = [start]
    for _ in range(max_steps):
        nxt = []
        for cfg in frontier:
            for succ, i in step(M, cfg):
                if succ in parent:
                    continue
                parent[succ] = (cfg, i)
                if succ == (0, 0):
                    configs, rules = [succ], []
                    cur = succ
                    while parent[cur] is not None:
                        cur, i = parent[cur]
                        configs.append(cur)
                        rules.append(i)
                    return RunTrace(tuple(reversed(configs)), tuple(reversed(rules)))
                nxt.append(succ)
        if not nxt:
            break
        frontier = nxt
    return None


def halting_set_bounded(M: ModularMachine, box: int, max_steps: int) -> frozenset:
    """Configurations with both coordinates ``<= box`` that reach ``(0, 0)``
    within ``max_steps`` steps."""
    out = set()
    for a in range(box + 1):
        for b in range(box + 1):
            if find_halting_run(M, a, b, max_steps) is not None:
                out.add(Config(a, b))
    return frozenset(out)


# --- m-ary encoding of words over c_1..c_n and their inverses ---------------

def _letter_digit(l: Letter, n: int, prefix: str) -> int:
    if not l.gen.startswith(prefix):
        raise ValueError(f"letter {l.gen!r} is not one of {prefix}1..{prefix}{n}")
    try:
        i = int(l.gen[len(prefix):])
    except ValueError:
        raise ValueError(f"letter {l.gen!r} is not one of {prefix}1..{prefix}{n}") from None
    if not 1 <= i <= n:
        raise ValueError(f"letter {l.gen!r} is not one of {prefix}1..{prefix}{n}")
    return i if l.sign > 0 else n + i


def encode_word(w: Word, n: int, m: int, prefix: str = "c") -> int:
    """``alpha = sum_j i_j m^j`` for ``w = c_{i_k} ... c_{i_0}``; the inverse
    of ``c_i`` is digit ``n + i``."""
    if m < 2 * n + 1:
        raise ModulusTooSmall(f"modulus {m} cannot hold digits 1..{2 * n}")
    alpha = 0
    for l in w:
        alpha = alpha * m + _letter_digit(l, n, prefix)
    return alpha


def decode_word(alpha: int, n: int, m: int, prefix: str = "c") -> Word | None:
    """Inverse of :func:`encode_word`; ``None`` when some m-ary digit of
    ``alpha`` lies outside ``1..2n``."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    letters = []
    while alpha:
        alpha, digit = divmod(alpha, m)
        if not 1 <= digit <= 2 * n:
            return None
        if digit <= n:
            letters.append(Letter(f"{prefix}{digit}", 1))
        else:
            letters.append(Letter(f"{prefix}{digit - n}", -1))
    return Word(reversed(letters))


def index_set(n: int, m: int, alpha_max: int) -> list:
    """Sorted positive ``alpha <= alpha_max`` that encode a word."""
    out = []
    frontier = [0]
    while frontier:
        nxt = []
        for a in frontier:
            for digit in range(1, 2 * n + 1):
                b = a * m + digit
                if b <= alpha_max:
                    out.append(b)
                    nxt.append(b)
        frontier = nxt
    return sorted(out)
