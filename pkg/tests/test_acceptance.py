"""Acceptance criteria, one test (or pair of tests) per criterion.

Each test records a PASS/FAIL line that the run summary prints. Criteria
that do not hold as stated are still run in full and marked as strict
expected failures, so an unexpected pass would be reported.
"""

import json
import random

import pytest

from ordspace.checks import axioms_check, conradian_probe, convexity_check, q_conditions_check
from ordspace.cli import main
from ordspace.cones import (
    KleinCone,
    KleinLattice,
    LexSumCone,
    MagnusCone,
    PhiCone,
    PreimageQ,
    Z2Cone,
    conjugate_cone,
    free_factor_Q,
    free_factor_extension,
    lex_direct_sum_cone,
    opposite,
    ses_lex_cone,
)
from ordspace.dynamics import (
    e0_class,
    finite_orbit_probe,
    fingerprint,
    flip_orbit,
    tinf_action,
    tinf_decode,
    tararin_cones,
    tinf_encode,
)
from ordspace.groups import FreeGroup, Klein, Wreath, a_exponent_hom, abelianization, shifter
from ordspace.reductions import equivariance_suite, get_witness, is_sidon, random_z2_cone, refutation_probe, sidon_prefix
from ordspace.sets import FiniteSet, shift_action
from ordspace.words import Word, ball

from criteria import record
from oracles import sidon_greedy_oracle, t2_consistent_assignments


def klein_cones(count=50, seed=2024):
    rng = random.Random(seed)
    return [KleinCone(random_z2_cone(rng), s) for _ in range(count) for s in (1, -1)][: 2 * count]


def finite_sets(count, seed, radius=2):
    rng = random.Random(seed)
    pool = ball(2, radius)
    return [FiniteSet(tuple(rng.sample(pool, rng.randint(0, 6)))) for _ in range(count)]


def test_criterion_1_cone_axioms():
    cones = []
    cones += [(f"magnus({k})", MagnusCone(k), 4) for k in (2, 3)]
    cones += [(f"tararin{c.signs}", c, 4) for n in range(1, 6) for c in tararin_cones(n)]
    cones += [(f"klein{i}", c, 4) for i, c in enumerate(klein_cones(50))]
    cones += [("lexsum", lex_direct_sum_cone(MagnusCone(2)), 3),
              ("lexsum-conj", lex_direct_sum_cone(conjugate_cone(Word.parse("a1 b-1"), MagnusCone(2)), default=-1), 3)]
    cones += [("ses-abelian", ses_lex_cone(abelianization(2), MagnusCone(2), Z2Cone((1, -2), (0, 1))), 4),
              ("ses-a-exponent", ses_lex_cone(a_exponent_hom(), MagnusCone(2), LexSumCone(1, (1,), (-1,))), 4)]
    cones += [(f"relconvex-{name}", free_factor_extension(P, 3), 4)
              for name, P in [("magnus", MagnusCone(2)), ("opposite", opposite(MagnusCone(2))),
                              ("conj", conjugate_cone(Word.parse("b1 a1"), MagnusCone(2)))]]
    cones += [(f"phi{i}", PhiCone(A), 3) for i, A in enumerate(finite_sets(20, seed=7))]
    failures = []
    for name, cone, r in cones:
        rep = axioms_check(cone, cone.group if not isinstance(cone.group, Wreath) else Wreath(), r)
        if not rep.passed:
            failures.append((name, rep.counterexample))
    record(1, not failures, f"{len(cones)} cones, {len(failures)} with counterexamples (radius 4, wreath 3)")
    assert not failures


def test_criterion_2_tararin_count(capsys):
    counts = {}
    for n in range(1, 6):
        assert main(["tararin-enumerate", "--n", str(n), "--radius", "2", "--format", "json"]) == 0
        out = json.loads(capsys.readouterr().out)
        counts[n] = out["distinct"]
    brute = t2_consistent_assignments(4)
    ok = all(counts[n] == 2**n for n in counts) and brute == 4
    record(2, ok, f"distinct fingerprints {counts}; brute-force assignments on B4(T2): {brute}")
    assert ok


def test_criterion_3_klein_orbits():
    cones = klein_cones(50)
    sizes = [str(finite_orbit_probe(c, Klein(), 3)) for c in cones]
    convex = [convexity_check(KleinLattice(), c, Klein(), 3).passed for c in cones]
    ok = all(s == "finite(2)" for s in sizes) and all(convex)
    record(3, ok, f"{sizes.count('finite(2)')}/{len(cones)} finite(2); Z^2 convex in {sum(convex)}/{len(cones)}")
    assert ok


def test_criterion_4_tinf_e0():
    m = 6
    seqs = [tuple((i >> j) & 1 for j in range(m)) for i in range(2**m)]
    orbit_ok = all(flip_orbit(e) == e0_class(e, m) for e in seqs)
    action_ok = True
    for e in seqs:
        c = tinf_encode(e, span=m + 1)
        for j in range(2, m + 2):
            if tinf_decode(conjugate_cone(c.group.generator(j), c), m) != tinf_action(j, e):
                action_ok = False
    ok = orbit_ok and action_ok
    record(4, ok, f"orbits = E0 classes for all 64 sequences: {orbit_ok}; decode(conjugate) = action for x2..x7: {action_ok}")
    assert ok


def test_criterion_5_q_conditions():
    a = q_conditions_check(PreimageQ(a_exponent_hom(), LexSumCone(1)), FreeGroup(2), 4)
    b = q_conditions_check(free_factor_Q(3, {1, 2}), FreeGroup(3), 4)
    ok = a.passed and b.passed
    record(5, ok, f"preimage of Z+ over ker: {a.status}; free factor F2 in F3: {b.status}")
    assert ok


WITNESSES = ["relconvex", "free-factor:3", "finf-to-f2:4", "quotient", "free-cover:klein", "wreath"]


def test_criterion_6_equivariance():
    lines = []
    ok = True
    for name in WITNESSES:
        w = get_witness(name)
        samples = w.samples(32, seed=6, max_len=3)
        rep = equivariance_suite(w, samples, max(w.radius, 2))
        ok = ok and rep.passed and len(samples) >= 32
        lines.append(f"{name} {rep.failures}/{len(samples)}")
    exact = True
    for A in finite_sets(3, seed=60):
        for h in ball(2, 3):
            lhs = fingerprint(PhiCone(shift_action(h, A)), Wreath(), 3)
            rhs = fingerprint(conjugate_cone(shifter(h), PhiCone(A)), Wreath(), 3)
            exact = exact and lhs == rhs
    ok = ok and exact
    record(6, ok, "failures " + ", ".join(lines) + f"; phi(hA) = (0,h)phi(A)(0,h)^-1 for all |h| <= 3 at radius 3: {exact}")
    assert ok


def _pattern(A, window):
    return frozenset(x for x in window if A.contains(x))


def shift_inequivalent_pairs(count=10, seed=0):
    """Finite subsets of B2 whose B2-patterns differ under every shift by a
    word of length <= 4, in both directions."""
    B2, B4 = ball(2, 2), ball(2, 4)
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        A = FiniteSet(tuple(rng.sample(B2, rng.randint(1, 5))))
        A2 = FiniteSet(tuple(rng.sample(B2, rng.randint(1, 5))))
        if all(_pattern(shift_action(u, A), B2) != _pattern(A2, B2) for u in B4) and all(
            _pattern(shift_action(u, A2), B2) != _pattern(A, B2) for u in B4
        ):
            out.append((A, A2))
    return out


@pytest.mark.xfail(strict=True, reason="radius-2 wreath fingerprints only see whether e is in the set")
def test_criterion_7_refutation_probes():
    pairs = shift_inequivalent_pairs()
    at2 = [refutation_probe(PhiCone(A), PhiCone(B), Wreath(), 2, 3) for A, B in pairs]
    refuted = sum(r.passed for r in at2)
    found = [r.counterexample["elements"][0] for r in at2 if not r.passed]
    at3 = sum(refutation_probe(PhiCone(A), PhiCone(B), Wreath(), 3, 3).passed for A, B in pairs)
    ok = refuted == len(pairs)
    record(7, ok, f"radius 2: {refuted}/{len(pairs)} pairs without a conjugator (first conjugator found: {found[0] if found else None}); "
                  f"radius 3 for comparison: {at3}/{len(pairs)}")
    assert ok


def test_criterion_8_conradian():
    cones = [MagnusCone(2), MagnusCone(3), opposite(MagnusCone(2)), LexSumCone(3, (3, 1, 2), (1, -1, 1))]
    cones += [c for n in range(1, 6) for c in tararin_cones(n)]
    cones += klein_cones(50)
    bad = [c for c in cones if not conradian_probe(c, c.group, 3, 2).passed]
    record(8, not bad, f"{len(cones)} cones (bi-invariant, Tararin n <= 5, Klein), {len(bad)} refuted")
    assert not bad


def test_criterion_9_sidon_checks():
    C = sidon_prefix(12)
    oracle = sidon_greedy_oracle(12)
    ok = is_sidon(C) and list(C) == oracle
    record(9, ok, f"prefix(12) = {list(C)} distinct differences: {is_sidon(C)}; equals greedy oracle: {list(C) == oracle}")
    assert ok


@pytest.mark.xfail(strict=True, reason="the greedy distinct-difference sequence starts 1, 2, 4, 8, 13")
def test_criterion_9_stated_first_terms():
    first = list(sidon_prefix(5))
    ok = first == [1, 2, 5, 11, 23]
    record(9, ok, f"stated first five terms 1, 2, 5, 11, 23 vs computed {first}")
    assert ok


def test_criterion_10_determinism(tmp_path, capsys):
    runs = [
        ["reduce", name, "--bound", "32", "--seed", "10", "--format", "json"] for name in WITNESSES
    ]
    runs += [
        ["check", "axioms", "--cone", '{"kind": "magnus", "rank": 2}', "--radius", "3", "--format", "json"],
        ["orbit", "--cone", '{"kind": "klein", "u": [2, 1], "w": [0, 1], "zsign": -1}', "--radius", "3"],
        ["tararin-enumerate", "--n", "4", "--format", "json"],
    ]
    same = 0
    for i, argv in enumerate(runs):
        blobs = []
        for k in range(2):
            out = tmp_path / f"{i}-{k}.json"
            main(argv + ["--out", str(out)])
            capsys.readouterr()
            paths = [out, out.with_suffix(".dot")] if argv[0] == "orbit" else [out]
            blobs.append(b"".join(p.read_bytes() for p in paths))
        same += blobs[0] == blobs[1]
    ok = same == len(runs)
    record(10, ok, f"{same}/{len(runs)} reports byte-identical across repeated runs")
    assert ok
