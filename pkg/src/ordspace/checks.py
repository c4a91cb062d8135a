"""Exhaustive checks of order-theoretic conditions on Cayley balls.

Every checker returns a :class:`Report`. A pass means "no counterexample
with all quantifiers restricted to the ball"; it is evidence, not proof.
Sign evaluations themselves are exact, so a product of two ball elements is
judged even when it falls outside the ball.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .cones import Cone, QOracle
from .groups import Group, ball_of

_CHUNK = 256


@dataclass
class Report:
    check: str
    status: str = "pass"
    radius: int = 0
    checked: int = 0
    counterexample: Any = None
    violations: dict[str, int] = field(default_factory=dict)
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def fail(self, condition: str, witness) -> None:
        self.status = "fail"
        self.violations[condition] = self.violations.get(condition, 0) + 1
        if self.counterexample is None:
            self.counterexample = {"condition": condition, "elements": witness}

    def to_dict(self) -> dict:
        out = {"check": self.check, "status": self.status, "radius": self.radius, "checked": self.checked}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.violations:
            out["violations"] = dict(sorted(self.violations.items()))
        if self.details:
            out["details"] = self.details
        return out


def _membership(C) -> Callable[[Any], bool]:
    if isinstance(C, QOracle):
        return C.in_subgroup
    return C


def _nontrivial(group: Group, r: int, keep=None) -> list:
    return [g for g in ball_of(group, r) if not group.is_identity(g) and (keep is None or keep(g))]


def _can_batch(cone: Cone, group: Group) -> bool:
    return hasattr(cone, "batch_sign") and hasattr(group, "batch_mul")


def axioms_check(cone: Cone, group: Group | None = None, r: int = 3, stop_early: bool = True) -> Report:
    """Antisymmetry ``sign(g^-1) = -sign(g)`` on the ball and closure
    ``g, h > 1 => gh > 1`` for every pair of positive ball elements."""
    G = group if group is not None else cone.group
    rep = Report("axioms", radius=r)
    elems = _nontrivial(G, r, cone.domain)
    if _can_batch(cone, G):
        return _axioms_batch(cone, G, elems, rep)
    w = lambda *xs: [G.element_to_json(x) for x in xs]
    signs = {}
    for g in elems:
        s = cone.sign(g)
        if s not in (1, -1):
            rep.fail("sign value", w(g))
        signs[g] = s
    for g in elems:
        rep.checked += 1
        gi = G.inv(g)
        si = signs[gi] if gi in signs else cone.sign(gi)
        if si != -signs[g]:
            rep.fail("antisymmetry", w(g, gi))
            if stop_early:
                return rep
    pos = [g for g in elems if signs[g] > 0]
    for g in pos:
        for h in pos:
            rep.checked += 1
            gh = G.mul(g, h)
            if G.is_identity(gh) or cone.sign(gh) != 1:
                rep.fail("closure", w(g, h))
                if stop_early:
                    return rep
    return rep


def _axioms_batch(cone, G, elems, rep: Report) -> Report:
    w = lambda *xs: [G.element_to_json(x) for x in xs]
    E = G.as_array(elems)
    S = cone.batch_sign(E)
    Si = cone.batch_sign(G.as_array([G.inv(g) for g in elems]))
    rep.checked += len(elems)
    bad = np.nonzero(Si != -S)[0]
    if len(bad):
        g = elems[int(bad[0])]
        rep.fail("antisymmetry", w(g, G.inv(g)))
        return rep
    P = E[S > 0]
    pos = [g for g, s in zip(elems, S) if s > 0]
    for start in range(0, len(P), _CHUNK):
        block = P[start : start + _CHUNK]
        prod = G.batch_mul(block[:, None, :], P[None, :, :])
        sp = cone.batch_sign(prod)
        rep.checked += sp.size
        bad = np.argwhere(sp != 1)
        if len(bad):
            i, j = bad[0]
            rep.fail("closure", w(pos[start + int(i)], pos[int(j)]))
            return rep
    return rep


def q_conditions_check(q: QOracle, group: Group | None = None, r: int = 3) -> Report:
    """The three conditions making ``P u Q`` a cone for every cone ``P`` on
    ``C``: ``QQ in Q``; ``CQC in Q`` (checked as ``CQ in Q`` and
    ``QC in Q``); ``G = Q u Q^-1 u C`` with the three parts disjoint."""
    G = group if group is not None else q.ambient
    rep = Report("q_conditions", radius=r)
    w = lambda *xs: [G.element_to_json(x) for x in xs]
    elems = _nontrivial(G, r)
    C, Q = [], []
    for g in elems:
        rep.checked += 1
        in_c = q.in_subgroup(g)
        in_q = q.contains(g)
        in_qi = q.contains(G.inv(g))
        if in_c:
            C.append(g)
            if in_q or in_qi:
                rep.fail("partition: C meets Q u Q^-1", w(g))
        elif in_q and in_qi:
            rep.fail("partition: Q meets Q^-1", w(g))
        elif not in_q and not in_qi:
            rep.fail("partition: g outside Q u Q^-1 u C", w(g))
        if in_q and not in_c:
            Q.append(g)
    for g in Q:
        for h in Q:
            rep.checked += 1
            if not q.contains(G.mul(g, h)):
                rep.fail("QQ in Q", w(g, h))
    for c in C:
        for g in Q:
            rep.checked += 2
            if not q.contains(G.mul(c, g)):
                rep.fail("CQ in Q", w(c, g))
            if not q.contains(G.mul(g, c)):
                rep.fail("QC in Q", w(g, c))
    rep.details = {"subgroup_elements": len(C), "q_elements": len(Q)}
    return rep


def conradian_probe(cone: Cone, group: Group | None = None, r: int = 3, N: int = 2) -> Report:
    """Look for positive ``g, h`` in the ball with ``g^-1 h g^n <= 1`` for
    every ``n <= N``. A hit refutes the Conradian condition up to ``N``;
    passing says nothing about larger ``n``."""
    G = group if group is not None else cone.group
    rep = Report("conradian", radius=r, details={"N": N})
    pos = [g for g in _nontrivial(G, r, cone.domain) if cone.sign(g) > 0]
    for g in pos:
        gi = G.inv(g)
        for h in pos:
            rep.checked += 1
            x = G.mul(gi, h)
            for _ in range(N):
                x = G.mul(x, g)
                if cone.positive(x):
                    break
            else:
                rep.fail("no witness n <= N", [G.element_to_json(g), G.element_to_json(h)])
    return rep


def convexity_check(C, cone: Cone, group: Group | None = None, r: int = 3) -> Report:
    """``g < f < h`` with ``g, h`` in ``C`` forces ``f`` in ``C``.

    Over the ball this is the same as: for each ``f`` outside ``C``, the
    signs of ``c^-1 f`` agree for all ``c`` in ``C``.
    """
    G = group if group is not None else cone.group
    member = _membership(C)
    rep = Report("convexity", radius=r)
    ball = ball_of(G, r)
    inside = [c for c in ball if member(c)]
    for f in ball:
        if member(f):
            continue
        seen = {}
        for c in inside:
            rep.checked += 1
            seen.setdefault(cone.sign(G.mul(G.inv(c), f)), c)
            if len(seen) == 2:
                rep.fail("element between two subgroup elements",
                         [G.element_to_json(seen[1]), G.element_to_json(f), G.element_to_json(seen[-1])])
                break
    return rep


def biinvariance_check(cone: Cone, group: Group | None = None, r: int = 3, conj_radius: int = 1) -> Report:
    """``sign(g p g^-1) = sign(p)`` for ``p`` in ``B_r`` and ``g`` in ``B_conj_radius``."""
    G = group if group is not None else cone.group
    rep = Report("biinvariance", radius=r, details={"conj_radius": conj_radius})
    elems = _nontrivial(G, r, cone.domain)
    for g in ball_of(G, conj_radius):
        for p in elems:
            rep.checked += 1
            if cone.sign(G.conj(g, p)) != cone.sign(p):
                rep.fail("conjugation changes sign", [G.element_to_json(g), G.element_to_json(p)])
    return rep


def malnormality_probe(C, group: Group, r: int = 3) -> Report:
    """List ``h`` in ``B_r - C`` with ``h c h^-1`` in ``C`` for every ``c`` in
    ``C n B_r``: candidates against ``hCh^-1 in C => h in C``.

    Finding none is refutation evidence only; it cannot prove the condition.
    """
    member = _membership(C)
    rep = Report("malnormality", radius=r)
    ball = ball_of(group, r)
    inside = [c for c in ball if member(c) and not group.is_identity(c)]
    candidates = []
    for h in ball:
        if member(h):
            continue
        rep.checked += 1
        if all(member(group.conj(h, c)) for c in inside):
            candidates.append(group.element_to_json(h))
            rep.fail("h outside C normalises C on the ball", [candidates[-1]])
    rep.details = {"candidates": candidates, "subgroup_elements": len(inside)}
    return rep
