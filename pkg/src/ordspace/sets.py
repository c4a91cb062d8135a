"""Decidable subsets of F2: finite sets, cofinite sets and ball bitmaps."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .words import Word, ball


class SetDescriptor:
    def contains(self, x: Word) -> bool:
        raise NotImplementedError

    def __contains__(self, x: Word) -> bool:
        return self.contains(x)

    def to_json(self) -> dict:
        raise NotImplementedError


def _sorted_words(words) -> tuple[Word, ...]:
    return tuple(sorted(set(words), key=Word.shortlex_key))


@dataclass(frozen=True)
class FiniteSet(SetDescriptor):
    words: tuple[Word, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "words", _sorted_words(self.words))

    def contains(self, x: Word) -> bool:
        return x in self.words

    def to_json(self) -> dict:
        return {"kind": "finite", "words": [str(w) for w in self.words]}


@dataclass(frozen=True)
class CofiniteSet(SetDescriptor):
    """Everything except ``missing``."""

    missing: tuple[Word, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "missing", _sorted_words(self.missing))

    def contains(self, x: Word) -> bool:
        return x not in self.missing

    def to_json(self) -> dict:
        return {"kind": "cofinite", "missing": [str(w) for w in self.missing]}


@dataclass(frozen=True)
class BallBitmap(SetDescriptor):
    """Membership given bit by bit over the canonical ball ``B_r(F2)``;
    words outside the ball are not members."""

    radius: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) != len(ball(2, self.radius)):
            raise ValueError(f"bitmap needs {len(ball(2, self.radius))} bits")
        members = tuple(w for w, b in zip(ball(2, self.radius), self.bits) if b)
        object.__setattr__(self, "_members", members)

    def members(self) -> tuple[Word, ...]:
        return self._members

    def contains(self, x: Word) -> bool:
        return len(x) <= self.radius and x in self._members

    def to_json(self) -> dict:
        return {"kind": "bitmap", "radius": self.radius, "bits": "".join(map(str, self.bits))}


def set_from_json(obj) -> SetDescriptor:
    if isinstance(obj, str):
        obj = json.loads(obj)
    kind = obj.get("kind")
    if kind == "finite":
        return FiniteSet(tuple(Word.from_json(w) for w in obj.get("words", [])))
    if kind == "cofinite":
        return CofiniteSet(tuple(Word.from_json(w) for w in obj.get("missing", [])))
    if kind == "bitmap":
        bits = obj["bits"]
        if isinstance(bits, str):
            bits = [int(c) for c in bits]
        return BallBitmap(int(obj["radius"]), tuple(int(b) for b in bits))
    raise ValueError(f"unknown set kind {kind!r}")


def shift_action(u: Word, A: SetDescriptor) -> SetDescriptor:
    """Left shift: ``x in u.A`` iff ``u^-1 x in A``."""
    if isinstance(A, FiniteSet):
        return FiniteSet(tuple(u * x for x in A.words))
    if isinstance(A, CofiniteSet):
        return CofiniteSet(tuple(u * x for x in A.missing))
    if isinstance(A, BallBitmap):
        return FiniteSet(tuple(u * x for x in A.members()))
    raise TypeError(f"cannot shift {type(A).__name__}")
