"""Positive cones as total sign oracles.

A cone is a frozen dataclass with a ``group`` and a ``sign`` method returning
+1 or -1 on every non-identity element of its domain. Cones compose: the
constructions here take cones (and subgroup data) and return cones, so a
cone is a small expression tree that serialises to tagged JSON.

Nothing here assumes a construction is valid; :mod:`ordspace.checks`
verifies the cone axioms on balls.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .groups import (
    FreeAbelian,
    FreeGroup,
    FreeHom,
    Group,
    Klein,
    Tararin,
    Wreath,
    WreathElement,
    WreathTop,
    a_exponent_hom,
    group_from_json,
    hom_from_json,
)
from .sets import SetDescriptor, set_from_json
from .words import Word, magnus_sign, relabel, rs_rewrite


class IdentitySignError(ValueError):
    pass


class Cone:
    group: Group

    def sign(self, g) -> int:
        if self.group.is_identity(g):
            raise IdentitySignError("identity has no sign")
        return self._sign(g)

    def _sign(self, g) -> int:
        raise NotImplementedError

    def positive(self, g) -> bool:
        return not self.group.is_identity(g) and self._sign(g) > 0

    def less(self, g, h) -> bool:
        """``g < h`` in the left-ordering, i.e. ``g^-1 h`` is positive."""
        return self.positive(self.group.mul(self.group.inv(g), h))

    def domain(self, g) -> bool:
        """Whether ``g`` lies in the subgroup the cone orders."""
        return True

    def to_json(self) -> dict:
        raise NotImplementedError(f"{type(self).__name__} does not serialise")


def _sgn(x: int) -> int:
    return 1 if x > 0 else -1


@dataclass(frozen=True)
class MagnusCone(Cone):
    """The Magnus bi-ordering of a free group: sign of the least nonzero
    coefficient (degree first, then lexicographic in the labels) of
    ``magnus(g) - 1``."""

    rank: int | None = 2

    @property
    def group(self) -> FreeGroup:
        return FreeGroup(self.rank)

    def _sign(self, g: Word) -> int:
        return magnus_sign(g)

    def to_json(self) -> dict:
        return {"kind": "magnus", "rank": self.rank}


def magnus_cone(rank: int | None = 2) -> MagnusCone:
    return MagnusCone(rank)


@dataclass(frozen=True)
class LexSumCone(Cone):
    """Lexicographic cone on ``Z^k``: the first coordinate in ``order`` that is
    nonzero decides, with its sign multiplied by ``signs[i]``."""

    k: int = 2
    order: tuple[int, ...] = ()
    signs: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.order:
            object.__setattr__(self, "order", tuple(range(1, self.k + 1)))
        if not self.signs:
            object.__setattr__(self, "signs", (1,) * self.k)
        if sorted(self.order) != list(range(1, self.k + 1)) or len(self.signs) != self.k:
            raise ValueError("order must be a permutation of 1..k with one sign per index")

    @property
    def group(self) -> FreeAbelian:
        return FreeAbelian(self.k)

    def _sign(self, g) -> int:
        for i in self.order:
            if g[i - 1]:
                return _sgn(g[i - 1]) * self.signs[i - 1]
        raise IdentitySignError("identity has no sign")

    def batch_sign(self, arr: np.ndarray) -> np.ndarray:
        out = np.zeros(arr.shape[:-1], dtype=np.int64)
        for i in reversed(self.order):
            col = arr[..., i - 1]
            out = np.where(col != 0, np.sign(col) * self.signs[i - 1], out)
        return out

    def to_json(self) -> dict:
        return {"kind": "lexsum", "k": self.k, "order": list(self.order), "signs": list(self.signs)}


@dataclass(frozen=True)
class Z2Cone(Cone):
    """Cone on ``Z^2`` from two independent integer functionals: the sign of
    ``u.v`` decides, ``w.v`` breaks ties."""

    u: tuple[int, int] = (1, 0)
    w: tuple[int, int] = (0, 1)

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(self.u))
        object.__setattr__(self, "w", tuple(self.w))
        if self.u[0] * self.w[1] - self.u[1] * self.w[0] == 0:
            raise ValueError("u and w must be linearly independent")

    @property
    def group(self) -> FreeAbelian:
        return FreeAbelian(2)

    def _sign(self, g) -> int:
        d = self.u[0] * g[0] + self.u[1] * g[1]
        if d == 0:
            d = self.w[0] * g[0] + self.w[1] * g[1]
        return _sgn(d)

    def batch_sign(self, arr: np.ndarray) -> np.ndarray:
        d = self.u[0] * arr[..., 0] + self.u[1] * arr[..., 1]
        t = self.w[0] * arr[..., 0] + self.w[1] * arr[..., 1]
        return np.sign(np.where(d != 0, d, t))

    def opposite(self) -> "Z2Cone":
        return Z2Cone((-self.u[0], -self.u[1]), (-self.w[0], -self.w[1]))

    def to_json(self) -> dict:
        return {"kind": "z2", "u": list(self.u), "w": list(self.w)}


@dataclass(frozen=True)
class KleinCone(Cone):
    """Lexicographic cone from ``1 -> Z^2 -> G -> <z> -> 1``: the z-exponent
    decides (times ``zsign``), the lattice cone breaks ties."""

    lattice: Z2Cone = field(default_factory=Z2Cone)
    zsign: int = 1

    @property
    def group(self) -> Klein:
        return Klein()

    def _sign(self, g) -> int:
        if g[2]:
            return _sgn(g[2]) * self.zsign
        return self.lattice._sign(g)

    def batch_sign(self, arr: np.ndarray) -> np.ndarray:
        lat = self.lattice.batch_sign(arr)
        return np.where(arr[..., 2] != 0, np.sign(arr[..., 2]) * self.zsign, lat)

    def to_json(self) -> dict:
        return {"kind": "klein", "u": list(self.lattice.u), "w": list(self.lattice.w), "zsign": self.zsign}


@dataclass(frozen=True)
class TararinCone(Cone):
    """Cone on a Tararin tower fixed by the signs of the generators: the
    highest nonzero exponent decides.

    With ``infinite=True`` the cone lives on the infinite tower; generators
    past ``len(signs)`` are positive there, and ``span`` sets how many
    generators its balls use (default ``len(signs) + 1``).
    """

    signs: tuple[int, ...] = (1,)
    infinite: bool = False
    span: int = 0

    def __post_init__(self):
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")
        if self.infinite and self.span == 0:
            object.__setattr__(self, "span", len(self.signs) + 1)

    @property
    def n(self) -> int | None:
        return None if self.infinite else len(self.signs)

    @property
    def group(self) -> Tararin:
        return Tararin(None, self.span) if self.infinite else Tararin(len(self.signs))

    def _sign(self, g) -> int:
        for j in range(len(g) - 1, -1, -1):
            if g[j]:
                s = self.signs[j] if j < len(self.signs) else 1
                return _sgn(g[j]) * s
        raise IdentitySignError("identity has no sign")

    def batch_sign(self, arr: np.ndarray) -> np.ndarray:
        out = np.zeros(arr.shape[:-1], dtype=np.int64)
        for j in range(arr.shape[-1]):
            s = self.signs[j] if j < len(self.signs) else 1
            col = arr[..., j]
            out = np.where(col != 0, np.sign(col) * s, out)
        return out

    def to_json(self) -> dict:
        if self.infinite:
            eps = [1 if s > 0 else 0 for s in self.signs]
            return {"kind": "tararin_inf", "eps": eps, "span": self.span}
        return {"kind": "tararin", "signs": list(self.signs)}


@dataclass(frozen=True)
class ConjugateCone(Cone):
    """``g P g^-1``: sign at ``h`` is the sign of ``g^-1 h g`` under ``P``."""

    by: Any
    cone: Cone

    @property
    def group(self) -> Group:
        return self.cone.group

    def _pull(self, h):
        G = self.group
        return G.mul(G.mul(G.inv(self.by), h), self.by)

    def _sign(self, h) -> int:
        return self.cone._sign(self._pull(h))

    def domain(self, h) -> bool:
        return self.cone.domain(self._pull(h))

    def to_json(self) -> dict:
        return {"kind": "conjugate", "by": self.group.element_to_json(self.by), "cone": self.cone.to_json()}


def conjugate_cone(g, cone: Cone) -> Cone:
    G = cone.group
    if G.is_identity(g):
        return cone
    if isinstance(cone, ConjugateCone):
        by = G.mul(g, cone.by)
        return cone.cone if G.is_identity(by) else ConjugateCone(by, cone.cone)
    return ConjugateCone(g, cone)


@dataclass(frozen=True)
class OppositeCone(Cone):
    cone: Cone

    @property
    def group(self) -> Group:
        return self.cone.group

    def _sign(self, g) -> int:
        return -self.cone._sign(g)

    def domain(self, g) -> bool:
        return self.cone.domain(g)

    def batch_sign(self, arr):
        return -self.cone.batch_sign(arr)

    def to_json(self) -> dict:
        return {"kind": "opposite", "cone": self.cone.to_json()}


def opposite(cone: Cone) -> Cone:
    if isinstance(cone, OppositeCone):
        return cone.cone
    return OppositeCone(cone)


@dataclass(frozen=True)
class ConstantCone(Cone):
    """Not a cone: every element gets ``value``. A negative control."""

    ambient: Group
    value: int = 1

    @property
    def group(self) -> Group:
        return self.ambient

    def _sign(self, g) -> int:
        return self.value

    def to_json(self) -> dict:
        return {"kind": "constant", "group": self.ambient.to_json(), "sign": self.value}


# -- subgroup data -----------------------------------------------------------


class QOracle:
    """A subgroup ``C`` of ``ambient`` together with a set ``Q`` outside it.

    ``side(g)`` is 0 for ``g`` in ``C``, +1 for ``g`` in ``Q`` and -1
    otherwise; ``restrict`` rewrites an element of ``C`` in the coordinates
    of ``sub_group``.
    """

    ambient: Group
    sub_group: Group

    def in_subgroup(self, g) -> bool:
        raise NotImplementedError

    def contains(self, g) -> bool:
        return self.side(g) > 0

    def side(self, g) -> int:
        if self.in_subgroup(g):
            return 0
        return 1 if self.contains(g) else -1

    def restrict(self, g):
        return g

    def to_json(self) -> dict:
        raise NotImplementedError(f"{type(self).__name__} does not serialise")


@dataclass(frozen=True)
class FreeFactorQ(QOracle):
    """``Q = {g : gA > A}`` for the free factor ``A`` on the labels ``factor``.

    Cosets ``gA`` are compared through their representatives
    ``n_g = g rho(g)^-1`` in the kernel ``N`` of the retraction ``rho`` that
    deletes the other generators; ``N`` is normal and the Magnus order on it
    is invariant under conjugation by the whole group, which makes the coset
    order invariant under left multiplication.
    """

    rank: int | None
    factor: frozenset

    def __post_init__(self):
        object.__setattr__(self, "factor", frozenset(int(i) for i in self.factor))
        if not self.factor:
            raise ValueError("the factor needs at least one generator")
        if self.rank is not None and not all(1 <= i <= self.rank for i in self.factor):
            raise ValueError(f"{sorted(self.factor)} is not a free factor of F{self.rank}")

    @property
    def ambient(self) -> FreeGroup:
        return FreeGroup(self.rank)

    @property
    def sub_group(self) -> FreeGroup:
        return FreeGroup(len(self.factor))

    def in_subgroup(self, g: Word) -> bool:
        return all(i in self.factor for i, _ in g.letters)

    def coset_rep(self, g: Word) -> Word:
        retract = Word(tuple(l for l in g.letters if l[0] in self.factor))
        return g * retract.inverse()

    def side(self, g: Word) -> int:
        n = self.coset_rep(g)
        if not n.letters:
            return 0
        return magnus_sign(n)

    def restrict(self, g: Word) -> Word:
        return relabel(g, sorted(self.factor))

    def to_json(self) -> dict:
        return {"kind": "free_factor", "rank": self.rank, "factor": sorted(self.factor)}


def free_factor_Q(rank: int | None, factor) -> FreeFactorQ:
    return FreeFactorQ(rank, frozenset(factor))


@dataclass(frozen=True)
class PreimageQ(QOracle):
    """``C = ker q`` and ``Q = q^-1(positive cone of the quotient)``.

    ``coords="schreier"`` rewrites kernel elements of F2 over the basis
    ``x_n = a^n b a^-n`` (only meaningful for ``a -> 1, b -> 0``).
    """

    hom: Any
    quotient_cone: Cone
    ambient: Group = field(default_factory=lambda: FreeGroup(2))
    coords: str = ""

    @property
    def sub_group(self) -> Group:
        return FreeGroup(None) if self.coords == "schreier" else self.ambient

    def in_subgroup(self, g) -> bool:
        return self.hom.target.is_identity(self.hom(g))

    def side(self, g) -> int:
        y = self.hom(g)
        if self.hom.target.is_identity(y):
            return 0
        return self.quotient_cone._sign(y)

    def restrict(self, g):
        return rs_rewrite(g) if self.coords == "schreier" else g

    def to_json(self) -> dict:
        out = {
            "kind": "preimage",
            "hom": self.hom.to_json(),
            "cone": self.quotient_cone.to_json(),
            "ambient": self.ambient.to_json(),
        }
        if self.coords:
            out["coords"] = self.coords
        return out


@dataclass(frozen=True)
class AllNontrivialQ(QOracle):
    """``Q = G - {1}`` over the trivial subgroup. A negative control."""

    ambient: Group

    @property
    def sub_group(self) -> Group:
        return self.ambient

    def in_subgroup(self, g) -> bool:
        return self.ambient.is_identity(g)

    def contains(self, g) -> bool:
        return not self.ambient.is_identity(g)

    def to_json(self) -> dict:
        return {"kind": "all_nontrivial", "group": self.ambient.to_json()}


@dataclass(frozen=True)
class KleinLattice(QOracle):
    """``Z^2`` inside the Klein-type group, with ``Q`` the elements of
    positive z-exponent."""

    zsign: int = 1

    @property
    def ambient(self) -> Klein:
        return Klein()

    @property
    def sub_group(self) -> FreeAbelian:
        return FreeAbelian(2)

    def in_subgroup(self, g) -> bool:
        return g[2] == 0

    def side(self, g) -> int:
        return 0 if g[2] == 0 else _sgn(g[2]) * self.zsign

    def restrict(self, g):
        return (g[0], g[1])

    def to_json(self) -> dict:
        return {"kind": "klein_lattice", "zsign": self.zsign}


@dataclass(frozen=True)
class CoordinateSubgroup(QOracle):
    """The subgroup of ``Z^k`` spanned by the listed coordinates; ``Q`` uses
    the lexicographic order on the remaining ones."""

    k: int
    coords: tuple[int, ...]

    @property
    def ambient(self) -> FreeAbelian:
        return FreeAbelian(self.k)

    @property
    def sub_group(self) -> FreeAbelian:
        return FreeAbelian(len(self.coords))

    def in_subgroup(self, g) -> bool:
        return all(g[i - 1] == 0 for i in range(1, self.k + 1) if i not in self.coords)

    def side(self, g) -> int:
        for i in range(1, self.k + 1):
            if i not in self.coords and g[i - 1]:
                return _sgn(g[i - 1])
        return 0

    def restrict(self, g):
        return tuple(g[i - 1] for i in self.coords)

    def to_json(self) -> dict:
        return {"kind": "coordinates", "k": self.k, "coords": list(self.coords)}


@dataclass(frozen=True)
class RelConvexCone(Cone):
    """``P u Q``: the subgroup cone on ``C``, ``Q`` outside it."""

    sub: Cone
    q: QOracle

    @property
    def group(self) -> Group:
        return self.q.ambient

    def _sign(self, g) -> int:
        s = self.q.side(g)
        if s == 0:
            return self.sub._sign(self.q.restrict(g))
        return s

    def to_json(self) -> dict:
        return {"kind": "relconvex", "sub": self.sub.to_json(), "q": self.q.to_json()}


def relconvex_ext_cone(P: Cone, Q: QOracle) -> RelConvexCone:
    return RelConvexCone(P, Q)


def ses_lex_cone(q, kernel_cone: Cone, quotient_cone: Cone, ambient: Group | None = None) -> RelConvexCone:
    """Lexicographic cone from ``1 -> ker q -> G -> H -> 1``: the quotient
    decides and the kernel cone, evaluated on ``G``'s own elements, breaks
    ties."""
    if ambient is None:
        ambient = q.source if isinstance(q, FreeHom) else kernel_cone.group
    return RelConvexCone(kernel_cone, PreimageQ(q, quotient_cone, ambient))


# -- direct sums and the wreath product --------------------------------------


def lex_min_index(indices, index_order: Cone | None):
    """The least index under ``index_order`` (``None``: natural order)."""
    it = iter(indices)
    best = next(it)
    for x in it:
        if index_order is None:
            if x < best:
                best = x
        elif index_order.less(x, best):
            best = x
    return best


def _lamp_items(f) -> list:
    if isinstance(f, WreathElement):
        if f.top.letters:
            raise ValueError("evaluated off the base group")
        return list(f.lamps)
    if isinstance(f, dict):
        return [(i, c) for i, c in f.items() if c]
    return [(i, c) for i, c in f if c]


@dataclass(frozen=True)
class LexDirectSumCone(Cone):
    """Lexicographic cone on ``(+)_{x in F2} Z`` (the wreath base).

    The least support point ``i_f`` under ``index_order`` decides; the factor
    there is ordered by ``factor_signs.get(i_f, default)`` times the usual
    sign of ``Z``.
    """

    index_order: Cone | None = field(default_factory=MagnusCone)
    factor_signs: tuple[tuple[Word, int], ...] = ()
    default: int = 1

    @property
    def group(self) -> Wreath:
        return Wreath()

    def domain(self, g) -> bool:
        return not g.top.letters

    def sign(self, f) -> int:
        items = _lamp_items(f)
        if not items:
            raise IdentitySignError("identity has no sign")
        return self._sign(f)

    def _sign(self, f) -> int:
        items = dict(_lamp_items(f))
        i = lex_min_index(items, self.index_order)
        return _sgn(items[i]) * dict(self.factor_signs).get(i, self.default)


def lex_direct_sum_cone(index_order: Cone | None, factor_signs: dict | None = None, default: int = 1) -> LexDirectSumCone:
    return LexDirectSumCone(index_order, tuple(sorted((factor_signs or {}).items(), key=lambda p: p[0].shortlex_key())), default)


@dataclass(frozen=True)
class WreathRACone(Cone):
    """``R_A`` on the base ``B``: lexicographic with factor ``P`` at points of
    ``A`` and ``P^-1`` elsewhere, points ordered by ``index_order``."""

    A: SetDescriptor
    base: int = 1
    index_order: Cone = field(default_factory=MagnusCone)

    @property
    def group(self) -> Wreath:
        return Wreath()

    def domain(self, g) -> bool:
        return not g.top.letters

    def _sign(self, w: WreathElement) -> int:
        if w.top.letters:
            raise ValueError("evaluated off the base group")
        i = lex_min_index([x for x, _ in w.lamps], self.index_order)
        s = _sgn(w.value(i)) * self.base
        return s if self.A.contains(i) else -s

    def to_json(self) -> dict:
        return {"kind": "wreath_ra", "A": self.A.to_json(), "base": self.base}


def wreath_RA(A: SetDescriptor, order: Cone | None = None, base: int = 1) -> WreathRACone:
    return WreathRACone(A, base, order if order is not None else MagnusCone(2))


@dataclass(frozen=True)
class PhiCone(Cone):
    """``R_A u q^-1(Q)`` on ``Z wr F2`` with ``Q`` and the index order both
    the Magnus order of F2."""

    A: SetDescriptor

    @property
    def group(self) -> Wreath:
        return Wreath()

    def _sign(self, w: WreathElement) -> int:
        if w.top.letters:
            return magnus_sign(w.top)
        return WreathRACone(self.A)._sign(w)

    def to_json(self) -> dict:
        return {"kind": "phi", "A": self.A.to_json()}


def phi(A: SetDescriptor) -> PhiCone:
    return PhiCone(A)


def sign(cone: Cone, g) -> int:
    return cone.sign(g)


# -- composite constructions used by the reductions -----------------------------


def free_factor_extension(source: Cone, n: int | None) -> RelConvexCone:
    """Extend a cone on F2 to F_n with F2 convex."""
    return RelConvexCone(source, free_factor_Q(n, {1, 2}))


def schreier_subgroup_extension(source: Cone, sidon: tuple[int, ...]) -> RelConvexCone:
    """Extend a cone on ``F_k`` to F2 through ``<x_c : c in sidon>`` inside
    ``H = ker(a -> 1, b -> 0)``.

    Generator ``i`` of ``F_k`` is ``x_{c_i} = a^{c_i} b a^{-c_i}``. The
    inner step makes ``<C>`` convex in ``H`` (free factor), the outer one
    orders ``F2 / H = Z`` positively.
    """
    if len(sidon) != source.group.rank:
        raise ValueError("need one basis index per source generator")
    inner = RelConvexCone(source, free_factor_Q(None, sidon))
    outer_q = PreimageQ(a_exponent_hom(), LexSumCone(1), FreeGroup(2), coords="schreier")
    return RelConvexCone(inner, outer_q)


# -- JSON ----------------------------------------------------------------------


def q_from_json(obj) -> QOracle:
    kind = obj["kind"]
    if kind == "free_factor":
        return free_factor_Q(obj.get("rank"), obj["factor"])
    if kind == "preimage":
        hom = hom_from_json(obj["hom"])
        ambient = group_from_json(obj["ambient"]) if "ambient" in obj else hom.source
        return PreimageQ(hom, cone_from_json(obj["cone"]), ambient, obj.get("coords", ""))
    if kind == "all_nontrivial":
        return AllNontrivialQ(group_from_json(obj["group"]))
    if kind == "klein_lattice":
        return KleinLattice(int(obj.get("zsign", 1)))
    if kind == "coordinates":
        return CoordinateSubgroup(int(obj["k"]), tuple(obj["coords"]))
    raise ValueError(f"unknown subgroup kind {kind!r}")


def cone_from_json(obj) -> Cone:
    if isinstance(obj, str):
        obj = json.loads(obj)
    kind = obj.get("kind")
    if kind == "magnus":
        return MagnusCone(obj.get("rank", 2))
    if kind == "lexsum":
        k = int(obj["k"])
        return LexSumCone(k, tuple(obj.get("order", ())), tuple(obj.get("signs", ())))
    if kind == "z2":
        return Z2Cone(tuple(obj["u"]), tuple(obj["w"]))
    if kind == "klein":
        return KleinCone(Z2Cone(tuple(obj.get("u", (1, 0))), tuple(obj.get("w", (0, 1)))), int(obj.get("zsign", 1)))
    if kind == "tararin":
        return TararinCone(tuple(obj["signs"]))
    if kind == "tararin_inf":
        from .dynamics import tinf_encode

        return tinf_encode(tuple(obj["eps"]), span=int(obj.get("span", 0)))
    if kind == "conjugate":
        inner = cone_from_json(obj["cone"])
        g = inner.group.element_from_json(obj["by"])
        return conjugate_cone(g, inner)
    if kind == "opposite":
        return opposite(cone_from_json(obj["cone"]))
    if kind == "constant":
        return ConstantCone(group_from_json(obj["group"]), int(obj.get("sign", 1)))
    if kind == "wreath_ra":
        return WreathRACone(set_from_json(obj["A"]), int(obj.get("base", 1)))
    if kind == "phi":
        return PhiCone(set_from_json(obj["A"]))
    if kind == "relconvex":
        return RelConvexCone(cone_from_json(obj["sub"]), q_from_json(obj["q"]))
    if kind == "free_factor_ext":
        return free_factor_extension(cone_from_json(obj["source"]), obj.get("n", 3))
    if kind == "finf_to_f2":
        from .reductions import sidon_prefix

        source = cone_from_json(obj["source"])
        return schreier_subgroup_extension(source, sidon_prefix(source.group.rank))
    if kind == "ses_lex":
        hom = hom_from_json(obj["hom"])
        kernel = cone_from_json(obj["kernel"])
        return ses_lex_cone(hom, kernel, cone_from_json(obj["quotient"]))
    raise ValueError(f"unknown cone kind {kind!r}")
