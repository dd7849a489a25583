"""Letters, words and word homomorphisms.

A word is an immutable sequence of signed generator letters.  The textual
syntax is whitespace separated identifiers with optional integer powers and
parenthesised groups, e.g. ``(x t)^12 t^-1``.  The empty word prints as ``1``.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Mapping, NamedTuple


class WordError(ValueError):
    pass


class UnknownGenerator(WordError):
    pass


class WordSyntaxError(WordError):
    pass


IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


class Letter(NamedTuple):
    gen: str
    sign: int = 1

    def inverse(self) -> "Letter":
        return Letter(self.gen, -self.sign)

    def __str__(self):
        return self.gen if self.sign > 0 else f"{self.gen}^-1"


class Word:
    """Immutable sequence of letters.

    Multiplication concatenates without cancelling; use :func:`free_reduce`
    (or :meth:`reduced`) for the group product.
    """

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable = ()):
        out = []
        for item in letters:
            if isinstance(item, Letter):
                out.append(item)
            elif isinstance(item, str):
                out.append(Letter(item, 1))
            else:
                gen, sign = item
                if sign not in (1, -1):
                    raise WordError(f"letter sign must be +1 or -1, got {sign}")
                out.append(Letter(gen, sign))
        self.letters = tuple(out)
        self._hash = None

    @classmethod
    def _make(cls, letters: tuple) -> "Word":
        # trusted constructor: letters is already a tuple of Letter
        w = object.__new__(cls)
        w.letters = letters
        w._hash = None
        return w

    @classmethod
    def parse(cls, text: str) -> "Word":
        return parse_word(text)

    @classmethod
    def gen(cls, name: str, power: int = 1) -> "Word":
        sign = 1 if power >= 0 else -1
        return cls([Letter(name, sign)] * abs(power))

    def __len__(self):
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return Word._make(self.letters[index])
        return self.letters[index]

    def __eq__(self, other):
        if isinstance(other, Word):
            return self.letters == other.letters
        return NotImplemented

    def __lt__(self, other):
        return self.letters < other.letters

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.letters)
        return self._hash

    def __bool__(self):
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word._make(self.letters + other.letters)

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        return Word._make(self.letters * n)

    def __invert__(self) -> "Word":
        return self.inverse()

    def inverse(self) -> "Word":
        return Word._make(tuple(Letter(l.gen, -l.sign) for l in reversed(self.letters)))

    def reduced(self) -> "Word":
        return free_reduce(self)

    def generators(self) -> set:
        return {l.gen for l in self.letters}

    def exponent_sum(self, gen: str) -> int:
        return sum(l.sign for l in self.letters if l.gen == gen)

    @property
    def is_reduced(self) -> bool:
        return all(a != b.inverse() for a, b in zip(self.letters, self.letters[1:]))

    @property
    def is_cyclically_reduced(self) -> bool:
        if not self.is_reduced:
            return False
        return len(self) < 2 or self.letters[0] != self.letters[-1].inverse()

    def __str__(self):
        return format_word(self)

    def __repr__(self):
        return f"Word({format_word(self)!r})"


EMPTY = Word()


def format_word(w: Word) -> str:
    if not w.letters:
        return "1"
    parts = []
    run_letter, run = w.letters[0], 0
    for l in w.letters + (None,):
        if l == run_letter:
            run += 1
            continue
        power = run * run_letter.sign
        parts.append(run_letter.gen if power == 1 else f"{run_letter.gen}^{power}")
        run_letter, run = l, 1
    return " ".join(parts)


_TOKEN = re.compile(r"\s*(?:(?P<id>[A-Za-z_][A-Za-z0-9_']*)|(?P<int>[+-]?\d+)|(?P<op>[()^]))")


def _tokenize(text):
    pos, tokens = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise WordSyntaxError(f"unexpected character at {pos} in {text!r}")
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))
        pos = m.end()
    return tokens


def parse_word(text: str) -> Word:
    """Parse ``word := term+ ; term := atom ('^' integer)? ; atom := id | '(' word ')'``.

    ``1`` and the blank string denote the empty word.
    """
    tokens = _tokenize(text)
    if not tokens or tokens == [("int", "1")]:
        return EMPTY
    pos = 0

    def word(stop_at_paren):
        letters = []
        while pos < len(tokens):
            kind, val = tokens[pos]
            if kind == "op" and val == ")":
                if not stop_at_paren:
                    raise WordSyntaxError(f"unbalanced ')' in {text!r}")
                break
            letters.extend(term())
        return letters

    def term():
        nonlocal pos
        kind, val = tokens[pos]
        if kind == "id":
            pos += 1
            atom = [Letter(val, 1)]
        elif kind == "op" and val == "(":
            pos += 1
            atom = word(True)
            if pos >= len(tokens) or tokens[pos] != ("op", ")"):
                raise WordSyntaxError(f"missing ')' in {text!r}")
            pos += 1
        else:
            raise WordSyntaxError(f"unexpected token {val!r} in {text!r}")
        if pos < len(tokens) and tokens[pos] == ("op", "^"):
            pos += 1
            if pos >= len(tokens) or tokens[pos][0] != "int":
                raise WordSyntaxError(f"expected integer exponent in {text!r}")
            n = int(tokens[pos][1])
            pos += 1
            if n < 0:
                atom = [l.inverse() for l in reversed(atom)]
                n = -n
            atom = atom * n
        return atom

    letters = word(False)
    return Word(letters)


def free_reduce(w: Word) -> Word:
    stack = []
    for l in w.letters:
        if stack and stack[-1].gen == l.gen and stack[-1].sign == -l.sign:
            stack.pop()
        else:
            stack.append(l)
    if len(stack) == len(w.letters):
        return w
    return Word._make(tuple(stack))


def concat(*words: Word) -> Word:
    """Group product: concatenation followed by free reduction."""
    letters = []
    for w in words:
        letters.extend(w.letters)
    return free_reduce(Word._make(tuple(letters)))


def invert(w: Word) -> Word:
    return w.inverse()


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Split a freely reduced ``w`` as ``conjugator * core * conjugator^-1``."""
    letters = w.letters
    i, j = 0, len(letters) - 1
    while i < j and letters[i].gen == letters[j].gen and letters[i].sign == -letters[j].sign:
        i += 1
        j -= 1
    return Word._make(letters[i:j + 1]), Word._make(letters[:i])


def cyclic_permutations(w: Word) -> list[Word]:
    """All distinct rotations of ``w`` in rotation order."""
    if not w:
        return [w]
    seen, out = set(), []
    for i in range(len(w)):
        r = Word._make(w.letters[i:] + w.letters[:i])
        if r not in seen:
            seen.add(r)
            out.append(r)
    return out


def commutator(a: Word, b: Word) -> Word:
    """``a b a^-1 b^-1``."""
    return a * b * a.inverse() * b.inverse()


def conjugate(w: Word, by: Word) -> Word:
    """``by^-1 w by`` (not reduced)."""
    return by.inverse() * w * by


class GeneratorMap:
    """Homomorphism of free groups given by images of generators."""

    def __init__(self, assignments: Mapping[str, Word | str]):
        self.assignments = {
            g: (parse_word(v) if isinstance(v, str) else v) for g, v in assignments.items()
        }

    @classmethod
    def identity(cls, gens: Iterable[str]) -> "GeneratorMap":
        return cls({g: Word.gen(g) for g in gens})

    @property
    def source(self) -> set:
        return set(self.assignments)

    def __call__(self, w: Word) -> Word:
        return apply_map(self, w)

    def __repr__(self):
        inner = ", ".join(f"{g}->{v}" for g, v in self.assignments.items())
        return f"GeneratorMap({inner})"


def apply_map(phi: GeneratorMap, w: Word) -> Word:
    letters = []
    inv_cache = {}
    for l in w.letters:
        try:
            img = phi.assignments[l.gen]
        except KeyError:
            raise UnknownGenerator(f"generator {l.gen!r} not in map source") from None
        if l.sign > 0:
            letters.extend(img.letters)
        else:
            if l.gen not in inv_cache:
                inv_cache[l.gen] = img.inverse().letters
            letters.extend(inv_cache[l.gen])
    return free_reduce(Word._make(tuple(letters)))


_CHAR_BASE = 0x100


class Alphabet:
    """Fixed ordering of generators with integer and string letter codes.

    Generator ``g`` (by index) has code ``2g`` and its inverse ``2g + 1``.
    The string form maps each code to one character so subword search can use
    ``str`` operations.
    """

    def __init__(self, generators: Iterable[str]):
        self.generators = tuple(generators)
        self.index = {g: i for i, g in enumerate(self.generators)}
        if len(self.index) != len(self.generators):
            raise WordError("duplicate generator in alphabet")

    def code(self, l: Letter) -> int:
        try:
            return 2 * self.index[l.gen] + (0 if l.sign > 0 else 1)
        except KeyError:
            raise UnknownGenerator(f"generator {l.gen!r} not in alphabet") from None

    def encode(self, w: Word) -> tuple:
        return tuple(self.code(l) for l in w.letters)

    def decode(self, codes) -> Word:
        gens = self.generators
        return Word._make(tuple(Letter(gens[c >> 1], -1 if c & 1 else 1) for c in codes))

    def to_str(self, w: Word) -> str:
        return "".join(chr(_CHAR_BASE + self.code(l)) for l in w.letters)

    def from_str(self, s: str) -> Word:
        return self.decode(ord(ch) - _CHAR_BASE for ch in s)


def str_inverse(s: str) -> str:
    return "".join(chr(ord(ch) ^ 1) for ch in reversed(s))


def str_free_reduce(s: str) -> str:
    stack = []
    for ch in s:
        if stack and ord(stack[-1]) == ord(ch) ^ 1:
            stack.pop()
        else:
            stack.append(ch)
    return "".join(stack)


def str_cyclic_core(s: str) -> str:
    i, j = 0, len(s) - 1
    while i < j and ord(s[i]) == ord(s[j]) ^ 1:
        i += 1
        j -= 1
    return s[i:j + 1]


def str_min_rotation(s: str) -> str:
    """Least rotation (Booth's algorithm)."""
    n = len(s)
    if n < 2:
        return s
    d = s + s
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        i = f[j - k - 1]
        while i != -1 and d[j] != d[k + i + 1]:
            if d[j] < d[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if i == -1 and d[j] != d[k]:
            if d[j] < d[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return d[k:k + n]


def str_cyclic_key(s: str) -> str:
    """Class of a cyclic word up to rotation and inversion."""
    core = str_cyclic_core(str_free_reduce(s))
    return min(str_min_rotation(core), str_min_rotation(str_inverse(core)))
