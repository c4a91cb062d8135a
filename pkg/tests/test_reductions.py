import random

import pytest

from ordspace.checks import axioms_check
from ordspace.cones import (
    AllNontrivialQ,
    LexSumCone,
    MagnusCone,
    PhiCone,
    TararinCone,
    conjugate_cone,
    opposite,
)
from ordspace.dynamics import fingerprint
from ordspace.groups import FreeAbelian, FreeGroup, Klein, Tararin, Wreath, a_exponent_hom, lamp, shifter
from ordspace.reductions import (
    WITNESSES,
    a_exponent_quotient_reduction,
    equivariance_suite,
    finf_cover_reduction,
    finf_to_f2_reduction,
    free_factor_reduction,
    get_witness,
    is_sidon,
    quotient_reduction,
    refutation_probe,
    relconvex_reduction,
    schreier_embedding,
    sidon_prefix,
    transport_multiplicativity,
    universal_reduction,
)
from ordspace.sets import CofiniteSet, FiniteSet, shift_action
from ordspace.words import Word, ball

from oracles import sidon_greedy_oracle

W = Word.parse


def test_sidon_prefix_matches_greedy_oracle():
    for k in range(1, 13):
        assert list(sidon_prefix(k)) == sidon_greedy_oracle(k)
    assert sidon_prefix(1) == (1,)
    with pytest.raises(ValueError):
        sidon_prefix(0)


@pytest.mark.parametrize("k", range(1, 13))
def test_sidon_prefix_differences_distinct(k):
    C = sidon_prefix(k)
    diffs = [y - x for i, x in enumerate(C) for y in C[i + 1:]]
    assert len(diffs) == len(set(diffs))
    assert is_sidon(C)


def test_is_sidon_rejects_repeated_difference():
    assert not is_sidon((1, 2, 3))


def test_schreier_embedding_images():
    c = sidon_prefix(3)
    embed = schreier_embedding(c)
    assert embed(W("a1")) == W("a1") * W("b1") * W("a-1")
    assert embed(W("b1")) == Word.gen(1, c[1]) * W("b1") * Word.gen(1, -c[1])


@pytest.mark.parametrize("name", ["relconvex", "free-factor", "finf-to-f2", "quotient", "free-cover", "wreath"])
def test_witness_suites_pass(name):
    w = get_witness(name)
    rep = equivariance_suite(w, w.samples(32, seed=3))
    assert rep.passed, rep.to_dict()["results"]


@pytest.mark.parametrize("name", ["free-factor:4", "free-factor:inf", "finf-to-f2:2", "quotient:z",
                                  "free-cover:tararin3", "free-cover:z2", "free-cover:z3"])
def test_witness_variants_pass(name):
    w = get_witness(name)
    assert equivariance_suite(w, w.samples(16, seed=1)).passed


def test_corrupted_transport_fails():
    w = get_witness("selftest-corrupted")
    rep = equivariance_suite(w, w.samples(32, seed=0))
    assert not rep.passed
    # the identity conjugator still passes
    assert rep.results[0]["status"] == "pass"


def test_unknown_witness():
    with pytest.raises(KeyError):
        get_witness("nope")
    assert set(WITNESSES) >= {"relconvex", "free-factor", "finf-to-f2", "quotient", "free-cover", "wreath"}


@pytest.mark.parametrize("name", ["relconvex", "free-factor", "finf-to-f2", "quotient", "free-cover", "wreath"])
def test_transport_is_multiplicative_on_samples(name):
    w = get_witness(name)
    rng = random.Random(7)
    pairs = [(w.objects(rng), w.conjugators(rng, 2), w.conjugators(rng, 2)) for _ in range(8)]
    assert transport_multiplicativity(w, pairs).passed


@pytest.mark.parametrize("name", ["relconvex", "free-factor", "finf-to-f2", "quotient", "free-cover"])
def test_forward_images_are_cones(name):
    w = get_witness(name)
    rng = random.Random(11)
    for _ in range(3):
        assert axioms_check(w.forward(w.objects(rng)), w.target_group, 3).passed


def test_wreath_images_are_cones():
    rng = random.Random(2)
    w = get_witness("wreath")
    for _ in range(5):
        assert axioms_check(w.forward(w.objects(rng)), Wreath(), 3).passed


def test_free_factor_magnus_image_passes_axioms():
    w = free_factor_reduction(3)
    assert axioms_check(w.forward(MagnusCone(2)), FreeGroup(3), 3).passed
    with pytest.raises(ValueError):
        free_factor_reduction(2)


def test_free_factor_identity_conjugator():
    w = free_factor_reduction(3)
    assert equivariance_suite(w, [(MagnusCone(2), Word())]).passed


def test_free_factor_exhaustive_short_conjugators():
    w = free_factor_reduction(3)
    P = opposite(MagnusCone(2))
    samples = [(P, g) for g in ball(2, 2)]
    assert equivariance_suite(w, samples, r=3).passed


def test_relconvex_distinct_sources_give_distinct_images():
    w = free_factor_reduction(3)
    a = fingerprint(w.forward(MagnusCone(2)), FreeGroup(3), 1)
    b = fingerprint(w.forward(opposite(MagnusCone(2))), FreeGroup(3), 1)
    # they differ on a and b, elements of the subgroup
    assert a.differences(b)[:2] == [0, 1]


def test_relconvex_rejects_bad_q():
    with pytest.raises(ValueError, match="Q conditions"):
        relconvex_reduction(AllNontrivialQ(FreeGroup(2)), None, None)


def test_finf_to_f2_magnus_image_is_a_cone():
    w = finf_to_f2_reduction(4)
    assert axioms_check(w.forward(MagnusCone(4)), FreeGroup(2), 3).passed


def test_finf_to_f2_equivariance_short_conjugators():
    w = finf_to_f2_reduction(3)
    samples = [(MagnusCone(3), g) for g in ball(3, 2)]
    assert equivariance_suite(w, samples, r=3).passed


def test_quotient_both_z_cones_map_to_cones():
    w = a_exponent_quotient_reduction()
    for s in (1, -1):
        assert axioms_check(w.forward(LexSumCone(1, (1,), (s,))), FreeGroup(2), 3).passed
    assert equivariance_suite(w, [(LexSumCone(1), (0,))]).passed


def test_quotient_rejects_non_invariant_kernel_cone():
    with pytest.raises(ValueError, match="not conjugation invariant"):
        quotient_reduction(a_exponent_hom(), TararinCone((1, 1)), Tararin(2), FreeAbelian(1), None, None)


def test_cover_klein_images_are_cones():
    w = finf_cover_reduction(Klein())
    rng = random.Random(4)
    for _ in range(3):
        assert axioms_check(w.forward(w.objects(rng)), FreeGroup(3), 3).passed


def test_cover_of_z_separates_the_two_cones():
    w = finf_cover_reduction(FreeAbelian(1))
    up = w.forward(LexSumCone(1, (1,), (1,)))
    down = w.forward(LexSumCone(1, (1,), (-1,)))
    rep = refutation_probe(up, down, FreeGroup(1), 3, 3)
    assert rep.passed


def test_cover_rejects_unsupported_group():
    with pytest.raises(ValueError):
        finf_cover_reduction(Wreath())


def test_universal_reduction_examples():
    phi, transport = universal_reduction(FiniteSet((W("a1"),)))
    assert isinstance(phi, PhiCone)
    assert transport(W("b1")) == shifter(W("b1"))
    empty, _ = universal_reduction(FiniteSet())
    full, _ = universal_reduction(CofiniteSet())
    assert empty.sign(lamp()) == -1 and full.sign(lamp()) == 1


@pytest.mark.parametrize("h", ball(2, 3)[::5])
def test_phi_equivariance_exact(h):
    rng = random.Random(len(h.letters))
    A = FiniteSet(tuple(rng.sample(ball(2, 2), 3)))
    phi, transport = universal_reduction(A)
    moved, _ = universal_reduction(shift_action(h, A))
    assert fingerprint(moved, Wreath(), 3) == fingerprint(conjugate_cone(transport(h), phi), Wreath(), 3)


def test_refutation_probe_radius_three_separates_sets():
    # membership of e, a, b, a^-1, b^-1 is visible at radius 3; {e} and
    # {e, a, b, a^-1, b^-1} differ there under every shift of length <= 1
    one = PhiCone(FiniteSet((Word(),)))
    star = PhiCone(FiniteSet(tuple(ball(2, 1))))
    assert refutation_probe(one, star, Wreath(), 3, 1).passed
