"""Freely reduced words, Cayley balls, Schreier rewriting and truncated Magnus
expansions.

A word is a tuple of letters ``(generator, exponent)`` with exponent +1 or -1.
Generators of a finite-rank alphabet are numbered ``1..rank``; the unbounded
alphabet accepts any integer label (this is what the Schreier basis
``x_n = a^n b a^-n``, ``n`` in Z, is written over).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

Letter = tuple[int, int]

_NAMES = "abcdefghijklmnopqrstuvwxyz"


def free_reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for g, e in letters:
        if e not in (1, -1):
            raise ValueError(f"letter exponent must be +1 or -1, got {e}")
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def generator_name(index: int) -> str:
    if 1 <= index <= len(_NAMES):
        return _NAMES[index - 1]
    return f"x[{index}]"


_TOKEN = re.compile(r"^(?:([a-z])|x\[(-?\d+)\])(?:\^?(-?\d+))?$")


@dataclass(frozen=True)
class Word:
    """A freely reduced word. Construction always reduces its input."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", free_reduce(self.letters))

    @classmethod
    def gen(cls, index: int, exponent: int = 1) -> "Word":
        sign = 1 if exponent > 0 else -1
        return cls(((index, sign),) * abs(exponent))

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse ``"a1 b1 a-1"``; ``"e"`` (or blank) is the empty word.

        Exponents other than +-1 expand, so ``"a2"`` and ``"a^2"`` mean ``a a``.
        A bare name means exponent 1. Generators past ``z`` are ``x[i]``.
        """
        text = text.strip()
        if text in ("", "e", "1"):
            return cls()
        letters: list[Letter] = []
        for tok in text.split():
            m = _TOKEN.match(tok)
            if m is None:
                raise ValueError(f"bad word token {tok!r}")
            index = _NAMES.index(m[1]) + 1 if m[1] else int(m[2])
            exp = int(m[3]) if m[3] is not None else 1
            letters.extend([(index, 1 if exp > 0 else -1)] * abs(exp))
        return cls(tuple(letters))

    @classmethod
    def from_json(cls, obj) -> "Word":
        if isinstance(obj, str):
            return cls.parse(obj)
        return cls(tuple((int(g), int(e)) for g, e in obj))

    def to_json(self) -> list[list[int]]:
        return [[g, e] for g, e in self.letters]

    def __str__(self) -> str:
        if not self.letters:
            return "e"
        return " ".join(f"{generator_name(g)}{e}" for g, e in self.letters)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        out = Word()
        for _ in range(abs(n)):
            out = out * base
        return out

    def inverse(self) -> "Word":
        return invert(self)

    def generators(self) -> set[int]:
        return {g for g, _ in self.letters}

    def shortlex_key(self) -> tuple:
        return (len(self.letters), tuple(letter_rank(l) for l in self.letters))

    def __lt__(self, other: "Word") -> bool:
        return self.shortlex_key() < other.shortlex_key()


def letter_rank(letter: Letter) -> tuple[int, int]:
    # a1 < a2 < ... < a1^-1 < a2^-1 < ...
    g, e = letter
    return (0 if e > 0 else 1, g)


def multiply(u: Word, v: Word) -> Word:
    left, right = u.letters, v.letters
    i = 0
    n = min(len(left), len(right))
    while i < n:
        g, e = left[-1 - i]
        h, f = right[i]
        if g != h or e != -f:
            break
        i += 1
    out = object.__new__(Word)
    object.__setattr__(out, "letters", left[: len(left) - i] + right[i:])
    return out


def invert(u: Word) -> Word:
    out = object.__new__(Word)
    object.__setattr__(out, "letters", tuple((g, -e) for g, e in reversed(u.letters)))
    return out


def alphabet(rank: int) -> list[Letter]:
    """Letters of a rank-``rank`` alphabet in canonical order."""
    return [(i, 1) for i in range(1, rank + 1)] + [(i, -1) for i in range(1, rank + 1)]


def ball(rank: int | None, r: int) -> list[Word]:
    """All reduced words of length <= r in shortlex order."""
    if rank is None:
        raise ValueError("finite rank required")
    if rank < 1 or r < 0:
        raise ValueError("rank must be positive and radius non-negative")
    return list(_ball(rank, r))


@lru_cache(maxsize=64)
def _ball(rank: int, r: int) -> tuple[Word, ...]:
    letters = alphabet(rank)
    out = [Word()]
    layer: list[tuple[Letter, ...]] = [()]
    for _ in range(r):
        nxt = []
        for w in layer:
            for g, e in letters:
                if w and w[-1] == (g, -e):
                    continue
                nxt.append(w + ((g, e),))
        layer = nxt
        out.extend(Word(w) for w in layer)
    return tuple(out)


def a_exponent(u: Word) -> int:
    """Exponent sum of generator 1; the map F2 -> Z with a -> 1, b -> 0."""
    return sum(e for g, e in u.letters if g == 1)


def rs_rewrite(u: Word) -> Word:
    """Rewrite ``u`` in ker(a -> 1, b -> 0) over the basis ``x_n = a^n b a^-n``.

    The result is a word in the unbounded alphabet; letter ``(n, e)`` stands
    for ``x_n^e``.
    """
    k = 0
    out: list[Letter] = []
    for g, e in u.letters:
        if g == 1:
            k += e
        elif g == 2:
            out.append((k, e))
        else:
            raise ValueError(f"generator {g} is not in the alphabet {{a, b}}")
    if k != 0:
        raise ValueError("not in kernel")
    return Word(tuple(out))


def rs_expand(basis_word: Word) -> Word:
    """Substitute ``x_n -> a^n b a^-n`` and reduce."""
    out: list[Letter] = []
    for n, e in basis_word.letters:
        s = 1 if n >= 0 else -1
        out.extend([(1, s)] * abs(n))
        out.append((2, e))
        out.extend([(1, -s)] * abs(n))
    return Word(tuple(out))


class NcPolynomial:
    """Integer polynomial in non-commuting variables, truncated at ``degree``.

    Monomials are tuples of variable labels; the empty tuple is the constant.
    """

    __slots__ = ("terms", "degree")

    def __init__(self, terms: dict[tuple[int, ...], int], degree: int):
        self.degree = degree
        self.terms = {m: c for m, c in terms.items() if c and len(m) <= degree}

    @classmethod
    def one(cls, degree: int) -> "NcPolynomial":
        return cls({(): 1}, degree)

    def __mul__(self, other: "NcPolynomial") -> "NcPolynomial":
        d = min(self.degree, other.degree)
        out: dict[tuple[int, ...], int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                if len(m1) + len(m2) <= d:
                    m = m1 + m2
                    out[m] = out.get(m, 0) + c1 * c2
        return NcPolynomial(out, d)

    def __eq__(self, other) -> bool:
        if isinstance(other, NcPolynomial):
            return self.terms == other.terms
        if isinstance(other, int):
            return self.terms == ({(): other} if other else {})
        return NotImplemented

    def __repr__(self) -> str:
        parts = []
        for m in sorted(self.terms, key=monomial_key):
            var = "".join(f"X{i}" for i in m) or "1"
            parts.append(f"{self.terms[m]:+d}*{var}")
        return f"NcPolynomial({' '.join(parts) or '0'}, degree={self.degree})"


def monomial_key(m: tuple[int, ...]) -> tuple:
    return (len(m), m)


def _letter_series(g: int, e: int, degree: int) -> dict[tuple[int, ...], int]:
    if e > 0:
        return {(): 1, (g,): 1} if degree >= 1 else {(): 1}
    return {(g,) * j: (-1) ** j for j in range(degree + 1)}


def magnus_truncated(u: Word, degree: int) -> NcPolynomial:
    """Image of ``u`` under ``a_i -> 1 + X_i`` modulo monomials of degree > ``degree``."""
    terms: dict[tuple[int, ...], int] = {(): 1}
    for g, e in u.letters:
        series = _letter_series(g, e, degree)
        out: dict[tuple[int, ...], int] = {}
        for m, c in terms.items():
            room = degree - len(m)
            for s, sc in series.items():
                if len(s) <= room:
                    key = m + s
                    out[key] = out.get(key, 0) + c * sc
        terms = {m: c for m, c in out.items() if c}
    return NcPolynomial(terms, degree)


@lru_cache(maxsize=1 << 18)
def magnus_sign(u: Word) -> int:
    """Sign of the least nonzero monomial of ``magnus(u) - 1``.

    Monomials are ordered by degree, then lexicographically by variable label.
    Degree 1 is read off the exponent sums; higher degrees are expanded one
    degree at a time until a nonzero coefficient appears.
    """
    if not u.letters:
        raise ValueError("identity has no sign")
    sums: dict[int, int] = {}
    for g, e in u.letters:
        sums[g] = sums.get(g, 0) + e
    for g in sorted(sums):
        if sums[g]:
            return 1 if sums[g] > 0 else -1
    d = 2
    while True:
        poly = magnus_truncated(u, d)
        top = [m for m in poly.terms if len(m) == d]
        if top:
            return 1 if poly.terms[min(top)] > 0 else -1
        d += 1
        if d > 4 * len(u) + 4:
            raise RuntimeError(f"no nonzero Magnus coefficient found for {u}")


def words_over(rank: int, length: int) -> Iterator[tuple[Letter, ...]]:
    """Every letter sequence (reduced or not) of the given length."""
    letters = alphabet(rank)
    if length == 0:
        yield ()
        return
    for head in words_over(rank, length - 1):
        for l in letters:
            yield head + (l,)


def relabel(u: Word, mapping: dict[int, int] | Sequence[int]) -> Word:
    if not isinstance(mapping, dict):
        mapping = {old: new for new, old in enumerate(mapping, start=1)}
    return Word(tuple((mapping[g], e) for g, e in u.letters))
