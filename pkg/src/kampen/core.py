"""Letters, words and the fixed four-relator presentation of G.

Letters are signed integers: ``T1 = 1`` (theta_1), ``T2 = 2`` (theta_2),
``A = 3``, ``K = 4``; the inverse of a letter is its negation.  Keeping them as
plain ints makes the hot loops (Cayley-graph BFS, diagram surgery) cheap.

Text format: ``t`` = theta_1, ``u`` = theta_2, ``a``, ``k``; capitals are
inverses.  The parser additionally accepts ``x^n`` powers (x a letter or a
parenthesised group) and commutators ``[x,y] = x^-1 y^-1 x y``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple

T1, T2, A, K = 1, 2, 3, 4
LETTERS = (T1, -T1, T2, -T2, A, -A, K, -K)


class Base(enum.IntEnum):
    THETA1 = T1
    THETA2 = T2
    A = A
    K = K


class GenLetter(NamedTuple):
    base: Base
    sign: int

    @classmethod
    def from_int(cls, x: int) -> "GenLetter":
        return cls(Base(abs(x)), 1 if x > 0 else -1)

    def __int__(self) -> int:
        return int(self.base) * self.sign

    def inverse(self) -> "GenLetter":
        return GenLetter(self.base, -self.sign)


def is_theta(x: int) -> bool:
    return abs(x) <= 2


_ASCII = {T1: "t", -T1: "T", T2: "u", -T2: "U", A: "a", -A: "A", K: "k", -K: "K"}
_FROM_ASCII = {c: x for x, c in _ASCII.items()}
_UNICODE = {T1: "θ₁", T2: "θ₂", A: "a", K: "k"}


def letter_to_char(x: int) -> str:
    return _ASCII[x]


def char_to_letter(c: str) -> int:
    return _FROM_ASCII[c]


def reduce_letters(letters: Iterable[int]) -> tuple[int, ...]:
    """Stack-based free reduction."""
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_freely_reduced(letters: tuple[int, ...]) -> bool:
    return all(letters[i] != -letters[i + 1] for i in range(len(letters) - 1))


@dataclass(frozen=True)
class Word:
    """An immutable word over the eight signed generators."""

    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if not isinstance(self.letters, tuple):
            object.__setattr__(self, "letters", tuple(self.letters))
        for x in self.letters:
            if x not in _ASCII:
                raise ValueError(f"not a generator letter: {x!r}")

    @cached_property
    def reduced(self) -> bool:
        return is_freely_reduced(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.letters[i])
        return self.letters[i]

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + tuple(other))

    def __mul__(self, n: int) -> "Word":
        return Word(self.letters * n)

    def inverse(self) -> "Word":
        return Word(tuple(-x for x in reversed(self.letters)))

    def power(self, n: int) -> "Word":
        return self * n if n >= 0 else self.inverse() * (-n)

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"


EMPTY = Word()


def word(text_or_letters) -> Word:
    """Convenience constructor accepting either text or an iterable of ints."""
    if isinstance(text_or_letters, str):
        return parse_word(text_or_letters)
    return Word(tuple(text_or_letters))


def free_reduce(w: Word) -> Word:
    return Word(reduce_letters(w.letters))


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Return ``(core, conjugator)`` with ``w == conjugator * core * conjugator^-1``
    freely and ``core`` cyclically reduced."""
    r = reduce_letters(w.letters)
    i, j = 0, len(r)
    while j - i >= 2 and r[i] == -r[j - 1]:
        i += 1
        j -= 1
    return Word(r[i:j]), Word(r[:i])


def commutator(x: Word, y: Word) -> Word:
    """``[x, y] = x^-1 y^-1 x y``."""
    return x.inverse() + y.inverse() + x + y


def u_word(n: int) -> Word:
    """The commutator ``[k^n, t^n U^n]``."""
    kn = Word((K,) * n)
    tt = Word((T1,) * n + (-T2,) * n)
    return commutator(kn, tt)


# -- relators -------------------------------------------------------------


class RelatorId(enum.Enum):
    R_A1 = "R_a1"
    R_A2 = "R_a2"
    R_K1 = "R_k1"
    R_K2 = "R_k2"


@dataclass(frozen=True)
class Relator:
    id: RelatorId
    word: Word

    @property
    def theta(self) -> int:
        return self.word[2]

    @property
    def is_k(self) -> bool:
        return self.id in (RelatorId.R_K1, RelatorId.R_K2)


def _rel_a(t: int) -> Word:
    return Word((-t, A, t, -A))


def _rel_k(t: int) -> Word:
    return Word((-t, K, t, -A, -K))


RELATORS: dict[RelatorId, Relator] = {
    RelatorId.R_A1: Relator(RelatorId.R_A1, _rel_a(T1)),
    RelatorId.R_A2: Relator(RelatorId.R_A2, _rel_a(T2)),
    RelatorId.R_K1: Relator(RelatorId.R_K1, _rel_k(T1)),
    RelatorId.R_K2: Relator(RelatorId.R_K2, _rel_k(T2)),
}


def rotations(letters: tuple[int, ...]) -> list[tuple[int, ...]]:
    return [letters[i:] + letters[:i] for i in range(len(letters))]


def _build_cyclic_table() -> dict[tuple[int, ...], RelatorId]:
    table = {}
    for rid, rel in RELATORS.items():
        for w in (rel.word.letters, rel.word.inverse().letters):
            for r in rotations(w):
                table[r] = rid
    return table


# every cyclic conjugate of every relator and of its inverse
RELATOR_CONJUGATES = _build_cyclic_table()


def match_relator(letters: tuple[int, ...]) -> RelatorId | None:
    return RELATOR_CONJUGATES.get(tuple(letters))


def is_cyclic_rotation(x: tuple[int, ...], y: tuple[int, ...]) -> bool:
    if len(x) != len(y):
        return False
    if not x:
        return True
    return any(x == r for r in rotations(y))


# -- text format ----------------------------------------------------------


class WordParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class _Parser:
    # grammar:  word   := factor*
    #           factor := atom ('^' '-'? digits)?
    #           atom   := letter | '(' word ')' | '[' word ',' word ']'
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, c: str):
        if self.peek() != c:
            raise WordParseError(f"expected {c!r}", self.pos)
        self.pos += 1

    def parse_word(self) -> tuple[int, ...]:
        out: list[int] = []
        while True:
            c = self.peek()
            if c == "" or c in ",])":
                return tuple(out)
            out.extend(self.parse_factor())

    def parse_factor(self) -> tuple[int, ...]:
        base = self.parse_atom()
        if self.peek() == "^":
            self.pos += 1
            self.skip()
            start = self.pos
            neg = False
            if self.pos < len(self.text) and self.text[self.pos] == "-":
                neg = True
                self.pos += 1
            digits_start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if self.pos == digits_start:
                raise WordParseError("malformed exponent", start)
            n = int(self.text[digits_start:self.pos])
            if neg:
                base = tuple(-x for x in reversed(base))
            return base * n
        return base

    def parse_atom(self) -> tuple[int, ...]:
        c = self.peek()
        if c in _FROM_ASCII:
            self.pos += 1
            return (_FROM_ASCII[c],)
        if c == "(":
            self.pos += 1
            inner = self.parse_word()
            self.expect(")")
            return inner
        if c == "[":
            self.pos += 1
            x = self.parse_word()
            self.expect(",")
            y = self.parse_word()
            self.expect("]")
            return commutator(Word(x), Word(y)).letters
        if c == "":
            raise WordParseError("unexpected end of input", self.pos)
        raise WordParseError(f"unexpected character {c!r}", self.pos)


def parse_word(text: str) -> Word:
    """Parse the ASCII word format; returns the literal (unreduced) word."""
    p = _Parser(text)
    letters = p.parse_word()
    p.skip()
    if p.pos != len(text):
        raise WordParseError(f"unexpected character {text[p.pos]!r}", p.pos)
    return Word(letters)


def format_word(w: Word | Iterable[int], unicode: bool = False) -> str:
    letters = tuple(w)
    if not unicode:
        return "".join(_ASCII[x] for x in letters)
    if not letters:
        return "ε"
    # run-length encode for readability: k a³ k⁻¹ ...
    parts = []
    i = 0
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        n = (j - i) * (1 if letters[i] > 0 else -1)
        sym = _UNICODE[abs(letters[i])]
        parts.append(sym if n == 1 else sym + _superscript(n))
        i = j
    return " ".join(parts)


_SUP = str.maketrans("-0123456789", "⁻⁰¹²³⁴⁵⁶⁷⁸⁹")


def _superscript(n: int) -> str:
    return str(n).translate(_SUP)
