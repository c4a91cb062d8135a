"""Reduction maps between conjugacy relations, with conjugator transport.

A :class:`ReductionWitness` sends an object (a cone, or a subset of F2) to
a cone on a target group, and sends a source conjugator to a target
conjugator. The equivariance suite checks, sample by sample, that acting
then mapping agrees with mapping then conjugating, by comparing ball
fingerprints. The converse direction cannot be decided on a ball; the
refutation probe only searches for conjugators up to a length bound.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Callable

from .checks import Report, biinvariance_check, q_conditions_check
from .cones import (
    Cone,
    KleinCone,
    LexSumCone,
    MagnusCone,
    PhiCone,
    PreimageQ,
    QOracle,
    RelConvexCone,
    TararinCone,
    Z2Cone,
    conjugate_cone,
    free_factor_Q,
    opposite,
    schreier_subgroup_extension,
    ses_lex_cone,
)
from .dynamics import fingerprint
from .groups import (
    FreeAbelian,
    FreeGroup,
    Group,
    Klein,
    Tararin,
    Wreath,
    a_exponent_hom,
    abelianization,
    ball_of,
    cover_hom,
    cover_section,
    shifter,
)
from .sets import FiniteSet, SetDescriptor, shift_action
from .words import Word, ball, rs_expand


@dataclass
class ReductionWitness:
    """``forward`` maps objects to target cones; ``act`` is the source
    action ``(g, object) -> object``; ``transport`` maps source conjugators
    to target conjugators."""

    name: str
    source: str
    target: str
    forward: Callable[[Any], Cone]
    act: Callable[[Any, Any], Any]
    transport: Callable[[Any], Any]
    target_group: Group
    source_group: Group
    objects: Callable[[random.Random], Any]
    conjugators: Callable[[random.Random, int], Any]
    describe: Callable[[Any], Any] = lambda obj: obj.to_json()
    radius: int = 3
    params: dict = field(default_factory=dict)

    def samples(self, count: int = 32, seed: int = 0, max_len: int = 3) -> list[tuple[Any, Any]]:
        """The identity conjugator first, then seeded random pairs."""
        rng = random.Random(seed)
        out = [(self.objects(rng), self.source_group.identity)]
        while len(out) < count:
            out.append((self.objects(rng), self.conjugators(rng, max_len)))
        return out


@dataclass
class SuiteReport:
    witness: str
    radius: int
    results: list[dict] = field(default_factory=list)

    @property
    def failures(self) -> int:
        return sum(1 for x in self.results if x["status"] != "pass")

    @property
    def status(self) -> str:
        return "pass" if self.failures == 0 else "fail"

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {
            "check": "equivariance",
            "witness": self.witness,
            "status": self.status,
            "radius": self.radius,
            "samples": len(self.results),
            "failures": self.failures,
            "results": self.results,
        }


def equivariance_suite(w: ReductionWitness, samples, r: int | None = None) -> SuiteReport:
    """For each ``(object, g)``: ``f(g.object)`` and ``t(g) f(object) t(g)^-1``
    must have the same fingerprint."""
    r = w.radius if r is None else r
    rep = SuiteReport(w.name, r)
    G = w.target_group
    for obj, g in samples:
        lhs = fingerprint(w.forward(w.act(g, obj)), G, r)
        rhs = fingerprint(conjugate_cone(w.transport(g), w.forward(obj)), G, r)
        entry = {
            "object": w.describe(obj),
            "conjugator": w.source_group.element_to_json(g),
            "status": "pass" if lhs == rhs else "fail",
        }
        if lhs != rhs:
            entry["first_difference"] = lhs.differences(rhs)[0]
        rep.results.append(entry)
    return rep


def transport_multiplicativity(w: ReductionWitness, pairs, r: int | None = None) -> Report:
    """``t(gh)`` and ``t(g) t(h)`` conjugate every sampled image alike."""
    r = w.radius if r is None else r
    S, T = w.source_group, w.target_group
    rep = Report("transport_multiplicativity", radius=r)
    for obj, g, h in pairs:
        rep.checked += 1
        F = w.forward(obj)
        one = fingerprint(conjugate_cone(w.transport(S.mul(g, h)), F), T, r)
        two = fingerprint(conjugate_cone(w.transport(g), conjugate_cone(w.transport(h), F)), T, r)
        if one != two:
            rep.fail("t(gh) differs from t(g)t(h)", [S.element_to_json(g), S.element_to_json(h)])
    return rep


def refutation_probe(first: Cone, second: Cone, group: Group, r: int, max_len: int) -> Report:
    """Search ``g`` of length <= ``max_len`` with ``g.first`` and ``second``
    fingerprint-equal at radius ``r``. Passes when none exists."""
    rep = Report("refutation", radius=r, details={"max_len": max_len})
    target = fingerprint(second, group, r)
    for g in ball_of(group, max_len):
        rep.checked += 1
        if fingerprint(conjugate_cone(g, first), group, r) == target:
            rep.fail("conjugator found", [group.element_to_json(g)])
            break
    return rep


# -- samplers -----------------------------------------------------------------


def _word(rng: random.Random, rank: int, max_len: int) -> Word:
    return rng.choice(ball(rank, max_len))


def _ball_element(group: Group, max_len: int):
    return lambda rng, n: rng.choice(ball_of(group, min(n, max_len)))


def random_z2_cone(rng: random.Random, bound: int = 3) -> Z2Cone:
    while True:
        u = (rng.randint(-bound, bound), rng.randint(-bound, bound))
        w = (rng.randint(-bound, bound), rng.randint(-bound, bound))
        if u[0] * w[1] - u[1] * w[0]:
            return Z2Cone(u, w)


def random_klein_cone(rng: random.Random) -> KleinCone:
    return KleinCone(random_z2_cone(rng), rng.choice((1, -1)))


def free_cones(rank: int, rng: random.Random) -> Cone:
    """A conjugate of one of a few structurally different cones on ``F_rank``."""
    if rank == 1:
        base = rng.choice([MagnusCone(1), opposite(MagnusCone(1))])
    else:
        kinds = [
            MagnusCone(rank),
            opposite(MagnusCone(rank)),
            ses_lex_cone(abelianization(rank), MagnusCone(rank), LexSumCone(rank, tuple(rng.sample(range(1, rank + 1), rank)), tuple(rng.choice((1, -1)) for _ in range(rank)))),
        ]
        base = rng.choice(kinds)
    return conjugate_cone(_word(rng, rank, 2), base)


# -- witnesses ----------------------------------------------------------------


def relconvex_reduction(Q: QOracle, source_sampler, conjugator_sampler, name: str = "relconvex",
                        check_radius: int = 3, radius: int = 3, fingerprint_group: Group | None = None) -> ReductionWitness:
    """``P -> P u Q`` for cones on the subgroup ``C`` of ``Q``.

    Rejected when ``Q`` fails the three conditions on ``B_check_radius``.
    Conjugators are taken from ``C`` and included into the ambient group.
    """
    rep = q_conditions_check(Q, Q.ambient, check_radius)
    if not rep.passed:
        raise ValueError(f"subgroup data fails the Q conditions: {rep.counterexample}")
    return ReductionWitness(
        name=name,
        source=f"cones on {Q.sub_group.to_json()}",
        target=f"cones on {Q.ambient.to_json()}",
        forward=lambda P: RelConvexCone(P, Q),
        act=conjugate_cone,
        transport=lambda g: g,
        target_group=fingerprint_group or Q.ambient,
        source_group=Q.sub_group,
        objects=source_sampler,
        conjugators=conjugator_sampler,
        radius=radius,
        params={"q": Q.to_json()},
    )


def free_factor_reduction(n: int | None = 3, radius: int = 3) -> ReductionWitness:
    """Cones on F2 to cones on ``F_n`` with F2 convex.

    For unbounded ``n`` the fingerprints are read on ``F_4``.
    """
    if n is not None and n < 3:
        raise ValueError("n must be at least 3")
    Q = free_factor_Q(n, {1, 2})
    target = FreeGroup(n if n is not None else 4)
    check_q = free_factor_Q(target.rank, {1, 2})
    rep = q_conditions_check(check_q, target, 3)
    if not rep.passed:
        raise ValueError(f"free factor data fails the Q conditions: {rep.counterexample}")
    w = ReductionWitness(
        name="free-factor",
        source="cones on F2",
        target=f"cones on F{n if n is not None else 'inf'}",
        forward=lambda P: RelConvexCone(P, Q),
        act=conjugate_cone,
        transport=lambda g: g,
        target_group=target,
        source_group=FreeGroup(2),
        objects=lambda rng: free_cones(2, rng),
        conjugators=lambda rng, m: _word(rng, 2, m),
        radius=radius,
        params={"n": n},
    )
    return w


def sidon_prefix(k: int) -> tuple[int, ...]:
    """Greedy prefix: keep appending the least positive integer whose
    differences with the terms so far are all new."""
    if k < 1:
        raise ValueError("k must be positive")
    out = [1]
    diffs: set[int] = set()
    c = 1
    while len(out) < k:
        c += 1
        new = [c - x for x in out]
        if not diffs.intersection(new) and len(set(new)) == len(new):
            out.append(c)
            diffs.update(new)
    return tuple(out)


def is_sidon(C) -> bool:
    """``|(C + l) n C| <= 1`` for every ``l != 0``, checked over all shifts
    that can meet ``C``."""
    S = set(C)
    span = max(S) - min(S) if S else 0
    return all(len({c + l for c in S} & S) <= 1 for l in range(-span, span + 1) if l)


def schreier_embedding(sidon) -> Callable[[Word], Word]:
    """``x_i -> a^{c_i} b a^{-c_i}`` on words over ``F_k``."""
    sidon = tuple(sidon)

    def embed(u: Word) -> Word:
        return rs_expand(Word(tuple((sidon[g - 1], e) for g, e in u.letters)))

    return embed


def finf_to_f2_reduction(k: int = 4, radius: int = 3) -> ReductionWitness:
    """Cones on ``F_k`` (a truncation of ``F_inf``) to cones on F2."""
    sidon = sidon_prefix(k)
    embed = schreier_embedding(sidon)
    return ReductionWitness(
        name="finf-to-f2",
        source=f"cones on F{k}",
        target="cones on F2",
        forward=lambda P: schreier_subgroup_extension(P, sidon),
        act=conjugate_cone,
        transport=embed,
        target_group=FreeGroup(2),
        source_group=FreeGroup(k),
        objects=lambda rng: free_cones(k, rng),
        conjugators=lambda rng, m: _word(rng, k, m),
        radius=radius,
        params={"k": k, "sidon": list(sidon)},
    )


def quotient_reduction(q, kernel_cone: Cone, ambient: Group, quotient_group: Group, section,
                       objects, name: str = "quotient", radius: int = 3, check_radius: int = 3) -> ReductionWitness:
    """Cones ``Q`` on the quotient to ``q^-1(Q) u P``.

    ``P`` must be invariant under conjugation by the ambient group; that is
    checked on the ball first and the construction is rejected otherwise.
    ``section`` picks a preimage for each quotient conjugator.
    """
    rep = biinvariance_check(kernel_cone, ambient, check_radius, conj_radius=1)
    if not rep.passed:
        raise ValueError(f"kernel cone is not conjugation invariant: {rep.counterexample}")
    return ReductionWitness(
        name=name,
        source=f"cones on {quotient_group.to_json()}",
        target=f"cones on {ambient.to_json()}",
        forward=lambda Qc: ses_lex_cone(q, kernel_cone, Qc, ambient),
        act=conjugate_cone,
        transport=section,
        target_group=ambient,
        source_group=quotient_group,
        objects=objects,
        conjugators=_ball_element(quotient_group, 3),
        radius=radius,
    )


def abelian_quotient_reduction(radius: int = 3) -> ReductionWitness:
    """F2 onto Z^2 with the Magnus cone on the commutator subgroup."""
    Z2 = FreeAbelian(2)
    return quotient_reduction(
        abelianization(2), MagnusCone(2), FreeGroup(2), Z2,
        lambda g: cover_section(Z2, g), random_z2_cone, radius=radius,
    )


def a_exponent_quotient_reduction(radius: int = 3) -> ReductionWitness:
    """F2 onto Z by the a-exponent, with the Magnus cone on the kernel."""
    Z = FreeAbelian(1)
    return quotient_reduction(
        a_exponent_hom(), MagnusCone(2), FreeGroup(2), Z,
        lambda g: Word.gen(1, g[0]), lambda rng: LexSumCone(1, (1,), (rng.choice((1, -1)),)),
        name="quotient-a-exponent", radius=radius,
    )


def _cover_objects(G: Group):
    if isinstance(G, Klein):
        return random_klein_cone
    if isinstance(G, Tararin) and G.n is not None:
        return lambda rng: TararinCone(tuple(rng.choice((1, -1)) for _ in range(G.n)))
    if isinstance(G, FreeAbelian):
        if G.k == 2:
            return random_z2_cone
        return lambda rng: LexSumCone(G.k, tuple(rng.sample(range(1, G.k + 1), G.k)), tuple(rng.choice((1, -1)) for _ in range(G.k)))
    raise ValueError(f"no cover reduction for {G.family}")


def finf_cover_reduction(G: Group, radius: int = 3) -> ReductionWitness:
    """Cones on ``G`` to cones on the free group over ``G``'s generators
    (the part of ``F_inf`` the surjection uses)."""
    objects = _cover_objects(G)
    p = cover_hom(G)
    F = FreeGroup(p.rank)
    w = quotient_reduction(p, MagnusCone(p.rank), F, G, lambda g: cover_section(G, g), objects,
                           name="free-cover", radius=radius)
    w.params = {"group": G.to_json()}
    return w


def universal_reduction(A: SetDescriptor):
    """``A -> phi(A)``, with ``h`` transported to ``(0, h)``."""
    return PhiCone(A), shifter


def random_finite_set(rng: random.Random, radius: int = 2, size: int | None = None) -> FiniteSet:
    pool = ball(2, radius)
    n = size if size is not None else rng.randint(0, 5)
    return FiniteSet(tuple(rng.sample(pool, n)))


def wreath_reduction(radius: int = 2, corrupt: bool = False) -> ReductionWitness:
    """Subsets of F2 under the shift to cones on ``Z wr F2``.

    ``corrupt=True`` transports ``h`` to ``(0, h^-1)``: a harness self-test
    that must fail.
    """
    transport = (lambda h: shifter(h.inverse())) if corrupt else shifter
    return ReductionWitness(
        name="selftest-corrupted" if corrupt else "wreath",
        source="subsets of F2",
        target="cones on Z wr F2",
        forward=PhiCone,
        act=shift_action,
        transport=transport,
        target_group=Wreath(),
        source_group=FreeGroup(2),
        objects=lambda rng: random_finite_set(rng, 2),
        conjugators=lambda rng, m: _word(rng, 2, m),
        radius=radius,
    )


def relconvex_free_factor_witness(radius: int = 3) -> ReductionWitness:
    """F2 inside F3 with the free-factor ``Q``."""
    return relconvex_reduction(
        free_factor_Q(3, {1, 2}),
        lambda rng: free_cones(2, rng),
        lambda rng, m: _word(rng, 2, m),
        radius=radius,
    )


def _cover_group(arg: str | None) -> Group:
    arg = (arg or "klein").lower()
    if arg == "klein":
        return Klein()
    if arg.startswith("tararin"):
        return Tararin(int(arg[len("tararin"):] or 2))
    if arg.startswith("z"):
        return FreeAbelian(int(arg[1:] or 2))
    raise ValueError(f"unknown cover group {arg!r}")


WITNESSES: dict[str, Callable[[str | None], ReductionWitness]] = {
    "relconvex": lambda arg: relconvex_free_factor_witness(),
    "free-factor": lambda arg: free_factor_reduction(None if arg == "inf" else int(arg or 3)),
    "finf-to-f2": lambda arg: finf_to_f2_reduction(int(arg or 4)),
    "quotient": lambda arg: a_exponent_quotient_reduction() if arg == "z" else abelian_quotient_reduction(),
    "free-cover": lambda arg: finf_cover_reduction(_cover_group(arg)),
    "wreath": lambda arg: wreath_reduction(),
    "selftest-corrupted": lambda arg: wreath_reduction(corrupt=True),
}


def get_witness(name: str) -> ReductionWitness:
    """Look up ``name`` or ``name:arg`` (e.g. ``finf-to-f2:4``, ``free-cover:tararin3``)."""
    name, _, arg = name.partition(":")
    if name not in WITNESSES:
        raise KeyError(f"unknown witness {name!r}; known: {', '.join(sorted(WITNESSES))}")
    return WITNESSES[name](arg or None)
