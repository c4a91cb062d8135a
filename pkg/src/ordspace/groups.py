"""Group families with exact normal forms.

Each descriptor is a frozen dataclass exposing ``identity``, ``mul``, ``inv``
and a finite generating set used for ball enumeration. Elements are plain
hashable values:

* free groups: :class:`~ordspace.words.Word`
* free abelian groups: tuples of ints
* Tararin groups: exponent tuples ``(k1, ..., kn)`` for ``x1^k1 ... xn^kn``
* the Klein-type group ``Z^2 x| <z>``: triples ``(v1, v2, k)``
* the wreath product ``Z wr F2``: :class:`WreathElement`
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable

import numpy as np

from .words import Word, ball, generator_name


class Group:
    """Shared behaviour; subclasses supply the arithmetic."""

    family: str = ""

    identity: Any = None

    def mul(self, g, h):
        raise NotImplementedError

    def inv(self, g):
        raise NotImplementedError

    def generators(self) -> list[tuple[str, Any]]:
        raise NotImplementedError

    def is_identity(self, g) -> bool:
        return g == self.identity

    def conj(self, g, x):
        """``g x g^-1``."""
        return self.mul(self.mul(g, x), self.inv(g))

    def prod(self, *elements):
        out = self.identity
        for g in elements:
            out = self.mul(out, g)
        return out

    def power(self, g, n: int):
        base = g if n >= 0 else self.inv(g)
        out = self.identity
        for _ in range(abs(n)):
            out = self.mul(out, base)
        return out

    def letters(self) -> list[tuple[str, Any]]:
        """Generators then their inverses, the canonical step order."""
        gens = self.generators()
        return gens + [(name + "^-1", self.inv(g)) for name, g in gens]

    def element_to_json(self, g):
        raise NotImplementedError

    def element_from_json(self, obj):
        raise NotImplementedError

    def format(self, g) -> str:
        return json.dumps(self.element_to_json(g))

    def parse(self, text: str):
        """Read an element from JSON or from a word in the generator names.

        Word tokens are ``name``, ``name^k`` or ``name<k>`` (e.g. ``x2-1``),
        matched greedily against the generator names.
        """
        text = text.strip()
        if text[:1] in "[{" and text:
            return self.element_from_json(json.loads(text))
        if text in ("", "e", "1"):
            return self.identity
        names = sorted(self.generators(), key=lambda p: -len(p[0]))
        out = self.identity
        for tok in text.split():
            for name, g in names:
                if tok.startswith(name):
                    rest = tok[len(name):].lstrip("^")
                    try:
                        exp = int(rest) if rest else 1
                    except ValueError:
                        continue
                    out = self.mul(out, self.power(g, exp))
                    break
            else:
                raise ValueError(f"unknown generator in token {tok!r}")
        return out

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class FreeGroup(Group):
    """Free group of finite rank, or unbounded rank (``rank=None``).

    The unbounded alphabet accepts any integer generator label.
    """

    rank: int | None = 2
    family = "free"

    def __post_init__(self):
        if self.rank is not None and self.rank < 1:
            raise ValueError("rank must be positive")

    @property
    def identity(self) -> Word:
        return Word()

    def mul(self, g: Word, h: Word) -> Word:
        return g * h

    def inv(self, g: Word) -> Word:
        return g.inverse()

    def is_identity(self, g: Word) -> bool:
        return not g.letters

    def generators(self):
        if self.rank is None:
            raise ValueError("finite rank required")
        return [(generator_name(i), Word.gen(i)) for i in range(1, self.rank + 1)]

    def contains(self, g: Word) -> bool:
        return self.rank is None or all(1 <= i <= self.rank for i, _ in g.letters)

    def parse(self, text: str) -> Word:
        text = text.strip()
        w = Word.from_json(json.loads(text)) if text.startswith("[") else Word.parse(text)
        if not self.contains(w):
            raise ValueError(f"{w} is not a word over F{self.rank}")
        return w

    def element_to_json(self, g: Word) -> str:
        return str(g)

    def element_from_json(self, obj) -> Word:
        return Word.from_json(obj)

    def format(self, g: Word) -> str:
        return str(g)

    def to_json(self) -> dict:
        return {"family": "free", "rank": self.rank}


@dataclass(frozen=True)
class FreeAbelian(Group):
    k: int = 2
    family = "free_abelian"

    @property
    def identity(self) -> tuple[int, ...]:
        return (0,) * self.k

    def mul(self, g, h):
        return tuple(x + y for x, y in zip(g, h))

    def inv(self, g):
        return tuple(-x for x in g)

    def generators(self):
        names = ["x", "y", "z"] if self.k <= 3 else [f"e{i}" for i in range(1, self.k + 1)]
        return [(names[i], tuple(int(i == j) for j in range(self.k))) for i in range(self.k)]

    def element_to_json(self, g):
        return list(g)

    def element_from_json(self, obj):
        if isinstance(obj, int):
            obj = [obj]
        if len(obj) != self.k:
            raise ValueError(f"expected {self.k} coordinates")
        return tuple(int(x) for x in obj)

    def to_json(self) -> dict:
        return {"family": "free_abelian", "k": self.k}

    def as_array(self, elements) -> np.ndarray:
        return np.array(elements, dtype=np.int64).reshape(len(elements), self.k)

    def batch_mul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        return A + B


def tararin_mul(s: tuple[int, ...], t: tuple[int, ...], n: int | None = None) -> tuple[int, ...]:
    """Product of normal forms in the tower where ``x_i`` inverts ``x_{i-1}``.

    Moving ``x_j^t`` left past ``x_{j+1}^s`` turns it into ``x_j^{(-1)^s t}``
    and every other pair commutes, so ``(st)_j = s_j + (-1)^{s_{j+1}} t_j``.
    With ``n=None`` (the infinite tower) tuples have trailing zeros trimmed.
    """
    m = max(len(s), len(t)) if n is None else n
    s = tuple(s) + (0,) * (m - len(s))
    t = tuple(t) + (0,) * (m - len(t))
    out = [s[j] + (t[j] if j + 1 >= m or s[j + 1] % 2 == 0 else -t[j]) for j in range(m)]
    if n is None:
        while out and out[-1] == 0:
            out.pop()
    return tuple(out)


def tararin_inv(s: tuple[int, ...], n: int | None = None) -> tuple[int, ...]:
    # (s^-1)_j = -(-1)^{s_{j+1}} s_j, read off from s * s^-1 = 1
    m = len(s)
    out = [-(s[j] if j + 1 >= m or s[j + 1] % 2 == 0 else -s[j]) for j in range(m)]
    return tuple(out)


@dataclass(frozen=True)
class Tararin(Group):
    """``<x1..xn | x_i x_{i-1} x_i^-1 = x_{i-1}^-1>`` realised as the tower
    ``T_n = T_{n-1} x| Z`` in which ``x_n`` inverts ``x_{n-1}`` and fixes the
    lower generators.

    ``n=None`` is the infinite tower; ``span`` then says how many generators
    the ball enumeration uses.
    """

    n: int | None = 2
    span: int = 0
    family = "tararin"

    def __post_init__(self):
        if self.n is not None and self.n < 1:
            raise ValueError("n must be positive")
        if self.n is None and self.span < 1:
            raise ValueError("the infinite tower needs a positive span")

    @property
    def width(self) -> int:
        return self.n if self.n is not None else self.span

    @property
    def identity(self):
        return (0,) * self.n if self.n is not None else ()

    def mul(self, g, h):
        return tararin_mul(g, h, self.n)

    def inv(self, g):
        return tararin_inv(g, self.n)

    def generator(self, i: int):
        if self.n is not None:
            if not 1 <= i <= self.n:
                raise ValueError(f"x{i} is not a generator of T{self.n}")
            return tuple(int(j == i - 1) for j in range(self.n))
        return (0,) * (i - 1) + (1,)

    def generators(self):
        return [(f"x{i}", self.generator(i)) for i in range(1, self.width + 1)]

    def element_to_json(self, g):
        return list(g)

    def element_from_json(self, obj):
        g = tuple(int(x) for x in obj)
        if self.n is not None:
            if len(g) > self.n or any(g[self.n:]):
                raise ValueError(f"too many coordinates for T{self.n}")
            return g + (0,) * (self.n - len(g))
        while g and g[-1] == 0:
            g = g[:-1]
        return g

    def to_json(self) -> dict:
        if self.n is None:
            return {"family": "tararin_inf", "span": self.span}
        return {"family": "tararin", "n": self.n}

    def as_array(self, elements) -> np.ndarray:
        w = self.width
        arr = np.zeros((len(elements), w), dtype=np.int64)
        for i, g in enumerate(elements):
            arr[i, : len(g)] = g
        return arr

    def batch_mul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        flip = np.ones_like(A)
        flip[..., :-1] = np.where(A[..., 1:] % 2 == 0, 1, -1)
        return A + flip * B


def klein_mul(p: tuple[int, int, int], q: tuple[int, int, int]) -> tuple[int, int, int]:
    """``(v, k)(v', k') = (v + (-1)^k v', k + k')``."""
    s = 1 if p[2] % 2 == 0 else -1
    return (p[0] + s * q[0], p[1] + s * q[1], p[2] + q[2])


@dataclass(frozen=True)
class Klein(Group):
    """``(Z x Z) x| <z>`` with ``z`` acting by minus the identity."""

    family = "klein"

    @property
    def identity(self):
        return (0, 0, 0)

    def mul(self, g, h):
        return klein_mul(g, h)

    def inv(self, g):
        s = 1 if g[2] % 2 == 0 else -1
        return (-s * g[0], -s * g[1], -g[2])

    def generators(self):
        return [("x", (1, 0, 0)), ("y", (0, 1, 0)), ("z", (0, 0, 1))]

    def element_to_json(self, g):
        return [[g[0], g[1]], g[2]]

    def element_from_json(self, obj):
        (v1, v2), k = obj
        return (int(v1), int(v2), int(k))

    def to_json(self) -> dict:
        return {"family": "klein"}

    def as_array(self, elements) -> np.ndarray:
        return np.array(elements, dtype=np.int64).reshape(len(elements), 3)

    def batch_mul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        s = np.where(A[..., 2] % 2 == 0, 1, -1)
        out = np.empty(np.broadcast_shapes(A.shape, B.shape), dtype=np.int64)
        out[..., 0] = A[..., 0] + s * B[..., 0]
        out[..., 1] = A[..., 1] + s * B[..., 1]
        out[..., 2] = A[..., 2] + B[..., 2]
        return out


@dataclass(frozen=True)
class WreathElement:
    """``(f, u)`` with ``f`` a finitely supported map F2 -> Z, ``u`` in F2.

    ``lamps`` holds the nonzero values of ``f`` sorted by shortlex position.
    """

    lamps: tuple[tuple[Word, int], ...] = ()
    top: Word = field(default_factory=Word)

    @classmethod
    def make(cls, lamps: dict[Word, int] | None = None, top: Word | None = None) -> "WreathElement":
        items = [(w, c) for w, c in (lamps or {}).items() if c]
        items.sort(key=lambda p: p[0].shortlex_key())
        return cls(tuple(items), top if top is not None else Word())

    def support(self) -> list[Word]:
        return [w for w, _ in self.lamps]

    def value(self, x: Word) -> int:
        for w, c in self.lamps:
            if w == x:
                return c
        return 0

    def __mul__(self, other: "WreathElement") -> "WreathElement":
        return wreath_mul(self, other)

    def __str__(self) -> str:
        lamps = ", ".join(f"{c}@[{w}]" for w, c in self.lamps) or "0"
        return f"({lamps}; {self.top})"


def wreath_mul(w: WreathElement, v: WreathElement) -> WreathElement:
    """``(f, u)(f', u') = (x -> f(x) + f'(u^-1 x), u u')``."""
    lamps = dict(w.lamps)
    for x, c in v.lamps:
        y = w.top * x
        lamps[y] = lamps.get(y, 0) + c
    return WreathElement.make(lamps, w.top * v.top)


def wreath_inv(w: WreathElement) -> WreathElement:
    u = w.top.inverse()
    return WreathElement.make({u * x: -c for x, c in w.lamps}, u)


def wreath_quotient(w: WreathElement) -> Word:
    return w.top


def lamp(x: Word | None = None, value: int = 1) -> WreathElement:
    """The base element with a single lamp at ``x``."""
    return WreathElement.make({x if x is not None else Word(): value})


def shifter(u: Word) -> WreathElement:
    """The element ``(0, u)``."""
    return WreathElement((), u)


@dataclass(frozen=True)
class Wreath(Group):
    """``Z wr F2`` generated by ``a``, ``b`` and the lamp ``t`` at the identity."""

    family = "wreath"

    @property
    def identity(self) -> WreathElement:
        return WreathElement()

    def mul(self, g, h):
        return wreath_mul(g, h)

    def inv(self, g):
        return wreath_inv(g)

    def is_identity(self, g) -> bool:
        return not g.lamps and not g.top.letters

    def generators(self):
        return [("a", shifter(Word.gen(1))), ("b", shifter(Word.gen(2))), ("t", lamp())]

    def element_to_json(self, g: WreathElement):
        return {"support": [[str(w), c] for w, c in g.lamps], "top": str(g.top)}

    def element_from_json(self, obj) -> WreathElement:
        lamps: dict[Word, int] = {}
        for w, c in obj.get("support", []):
            x = Word.from_json(w)
            lamps[x] = lamps.get(x, 0) + int(c)
        return WreathElement.make(lamps, Word.from_json(obj.get("top", "e")))

    def to_json(self) -> dict:
        return {"family": "wreath"}


def group_from_json(obj) -> Group:
    if isinstance(obj, str):
        obj = json.loads(obj)
    fam = obj.get("family")
    if fam == "free":
        return FreeGroup(obj.get("rank", 2))
    if fam == "free_abelian":
        return FreeAbelian(int(obj.get("k", 2)))
    if fam == "tararin":
        return Tararin(int(obj["n"]))
    if fam == "tararin_inf":
        return Tararin(None, int(obj.get("span", 1)))
    if fam == "klein":
        return Klein()
    if fam == "wreath":
        return Wreath()
    raise ValueError(f"unknown group family {fam!r}")


def ball_of(group: Group, r: int) -> list:
    """Elements of generator length <= r in canonical order.

    Breadth-first from the identity, expanding each layer in order by the
    letters ``g1..gk, g1^-1..gk^-1``; every element is listed once, at the
    position of its shortlex-least geodesic.
    """
    return list(_ball_of(group, r))


@lru_cache(maxsize=128)
def _ball_of(group: Group, r: int) -> tuple:
    if isinstance(group, FreeGroup):
        if group.rank is None:
            raise ValueError("finite rank required")
        return tuple(ball(group.rank, r))
    letters = [g for _, g in group.letters()]
    seen = {group.identity}
    out = [group.identity]
    layer = [group.identity]
    for _ in range(r):
        nxt = []
        for g in layer:
            for s in letters:
                h = group.mul(g, s)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        out.extend(nxt)
        layer = nxt
    return tuple(out)


def word_length_table(group: Group, r: int) -> dict:
    """Distance from the identity for every element of the ball."""
    out = {}
    q = deque([(group.identity, 0)])
    out[group.identity] = 0
    letters = [g for _, g in group.letters()]
    while q:
        g, d = q.popleft()
        if d == r:
            continue
        for s in letters:
            h = group.mul(g, s)
            if h not in out:
                out[h] = d + 1
                q.append((h, d + 1))
    return out


@dataclass(frozen=True)
class FreeHom:
    """Homomorphism out of a finite-rank free group, given on generators."""

    rank: int
    target: Group
    images: tuple
    name: str = ""

    def __post_init__(self):
        if len(self.images) != self.rank:
            raise ValueError("need one image per generator")

    @property
    def source(self) -> FreeGroup:
        return FreeGroup(self.rank)

    def __call__(self, u: Word):
        out = self.target.identity
        inverses = {}
        for g, e in u.letters:
            if not 1 <= g <= self.rank:
                raise ValueError(f"generator {g} outside the source alphabet")
            img = self.images[g - 1]
            if e < 0:
                if g not in inverses:
                    inverses[g] = self.target.inv(img)
                img = inverses[g]
            out = self.target.mul(out, img)
        return out

    def to_json(self) -> dict:
        if self.name:
            return {"kind": self.name, "rank": self.rank}
        return {
            "kind": "free_hom",
            "rank": self.rank,
            "target": self.target.to_json(),
            "images": [self.target.element_to_json(x) for x in self.images],
        }


def hom_apply(h: FreeHom, u: Word):
    return h(u)


def a_exponent_hom() -> FreeHom:
    """F2 -> Z, a -> 1, b -> 0."""
    return FreeHom(2, FreeAbelian(1), ((1,), (0,)), name="a_exponent")


def abelianization(rank: int) -> FreeHom:
    Z = FreeAbelian(rank)
    return FreeHom(rank, Z, tuple(g for _, g in Z.generators()), name="abelianization")


def cover_hom(group: Group) -> FreeHom:
    """The canonical surjection from the free group on ``group``'s generators."""
    gens = [g for _, g in group.generators()]
    return FreeHom(len(gens), group, tuple(gens))


def cover_section(group: Group, g) -> Word:
    """A word in the cover's generators mapping to ``g`` (its normal-form word)."""
    if isinstance(group, FreeAbelian):
        coords = list(g)
    elif isinstance(group, Tararin):
        coords = list(g) + [0] * (group.width - len(g))
        if len(coords) > group.width:
            raise ValueError("element uses generators past the span")
    elif isinstance(group, Klein):
        coords = list(g)
    else:
        raise ValueError(f"no section for {group.family}")
    out = Word()
    for i, c in enumerate(coords, start=1):
        out = out * Word.gen(i, c)
    return out


@dataclass(frozen=True)
class WreathTop:
    """The quotient map ``W -> F2``."""

    target = FreeGroup(2)

    def __call__(self, w: WreathElement) -> Word:
        return w.top

    def to_json(self) -> dict:
        return {"kind": "wreath_top"}


@dataclass(frozen=True)
class TopExponent:
    """``Klein -> Z`` (exponent of z) or ``T_n -> Z`` (exponent of x_n)."""

    group: Group
    target = FreeAbelian(1)

    def __call__(self, g):
        if isinstance(self.group, Klein):
            return (g[2],)
        return (g[-1] if g else 0,)

    def to_json(self) -> dict:
        return {"kind": "top_exponent", "group": self.group.to_json()}


def hom_from_json(obj) -> Callable:
    kind = obj["kind"]
    if kind == "a_exponent":
        return a_exponent_hom()
    if kind == "abelianization":
        return abelianization(int(obj["rank"]))
    if kind == "wreath_top":
        return WreathTop()
    if kind == "top_exponent":
        return TopExponent(group_from_json(obj["group"]))
    if kind == "free_hom":
        target = group_from_json(obj["target"])
        images = tuple(target.element_from_json(x) for x in obj["images"])
        return FreeHom(int(obj["rank"]), target, images)
    raise ValueError(f"unknown homomorphism {kind!r}")
