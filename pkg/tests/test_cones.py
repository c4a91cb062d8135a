import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ordspace.checks import axioms_check
from ordspace.cones import (
    AllNontrivialQ,
    ConstantCone,
    IdentitySignError,
    KleinCone,
    LexSumCone,
    MagnusCone,
    PhiCone,
    PreimageQ,
    RelConvexCone,
    TararinCone,
    Z2Cone,
    cone_from_json,
    conjugate_cone,
    free_factor_Q,
    free_factor_extension,
    lex_direct_sum_cone,
    opposite,
    ses_lex_cone,
    wreath_RA,
)
from ordspace.dynamics import fingerprint, tararin_cones
from ordspace.groups import FreeGroup, Klein, Tararin, Wreath, a_exponent_hom, abelianization, ball_of, lamp, shifter
from ordspace.sets import CofiniteSet, FiniteSet, shift_action
from ordspace.words import Word, ball

W = Word.parse


def test_sign_examples():
    assert MagnusCone(2).sign(W("a1")) == 1
    assert MagnusCone(2).sign(W("b1 a-1")) == -1
    G = Tararin(2)
    assert TararinCone((1, 1)).sign(G.mul(G.inv(G.generator(1)), G.generator(2))) == 1
    with pytest.raises(IdentitySignError, match="identity has no sign"):
        MagnusCone(2).sign(Word())


def test_magnus_cone_examples():
    M = MagnusCone(2)
    assert M.sign(W("a-1 b1")) == -1
    assert M.sign(W("a1 b1 a-1 b-1")) == 1


def test_magnus_biinvariant_on_ball():
    M = MagnusCone(2)
    B = ball(2, 4)
    conj = ball(2, 2)
    for p in B[1:]:
        s = M.sign(p)
        for g in conj:
            assert M.sign(g * p * g.inverse()) == s


def test_lex_sum_and_z2():
    L = LexSumCone(3, (2, 1, 3), (1, -1, 1))
    # coordinate 2 is read first and carries sign -1
    assert L.sign((5, 0, 0)) == 1
    assert L.sign((5, 1, 0)) == -1
    assert L.sign((-5, 0, 2)) == -1
    with pytest.raises(ValueError):
        Z2Cone((1, 2), (2, 4))
    z = Z2Cone((1, 1), (1, 0))
    assert z.sign((1, -1)) == 1 and z.sign((-1, 1)) == -1


def test_tararin_highest_index_decides():
    c = TararinCone((1, -1))
    assert c.sign((0, 1)) == -1
    assert c.sign((5, -1)) == 1
    assert c.sign((-3, 0)) == -1


def test_ses_lex_case_split():
    K = ses_lex_cone(a_exponent_hom(), MagnusCone(2), LexSumCone(1, (1,), (-1,)))
    assert K.sign(W("a1 b5")) == -1
    assert K.sign(W("b1")) == MagnusCone(2).sign(W("b1"))
    kc = KleinCone(Z2Cone(), -1)
    assert kc.sign((0, 0, 1)) == -1


def test_klein_conjugation_by_z_reverses_lattice_cone():
    R = Z2Cone((2, 1), (0, 1))
    for s in (1, -1):
        left = conjugate_cone((0, 0, 1), KleinCone(R, s))
        right = KleinCone(R.opposite(), s)
        assert fingerprint(left, Klein(), 3) == fingerprint(right, Klein(), 3)


def test_conjugation_composes():
    P = TararinCone((1, -1, 1))
    G = P.group
    g, h = (1, 1, 0), (0, -1, 1)
    twice = conjugate_cone(h, conjugate_cone(g, P))
    once = conjugate_cone(G.mul(h, g), P)
    assert fingerprint(twice, G, 4) == fingerprint(once, G, 4)
    assert conjugate_cone(G.identity, P) is P


@settings(max_examples=25, deadline=None)
@given(st.lists(st.sampled_from(ball(2, 2)), min_size=2, max_size=2))
def test_conjugation_composes_on_free_group(gh):
    g, h = gh
    P = ses_lex_cone(abelianization(2), MagnusCone(2), Z2Cone((1, -1), (0, 1)))
    assert fingerprint(conjugate_cone(h, conjugate_cone(g, P)), FreeGroup(2), 3) == fingerprint(conjugate_cone(h * g, P), FreeGroup(2), 3)


def test_opposite_is_an_involution():
    P = MagnusCone(2)
    assert opposite(opposite(P)) is P
    for g in ball(2, 3)[1:]:
        assert opposite(P).sign(g) == -P.sign(g)
    assert axioms_check(opposite(P), r=3).passed


def test_free_factor_q_examples():
    Q = free_factor_Q(3, {1, 2})
    assert Q.side(W("a1 b-1")) == 0
    assert not Q.contains(W("a1")) and not Q.contains(W("a-1"))
    assert Q.contains(W("c1"))
    assert not Q.contains(W("c-1"))
    with pytest.raises(ValueError):
        free_factor_Q(2, {1, 3})


def test_free_factor_q_left_invariance_under_factor():
    Q = free_factor_Q(3, {1, 2})
    for g in ball(3, 3):
        if Q.contains(g):
            for c in ball(2, 2):
                assert Q.contains(c * g)


def test_free_factor_q_is_left_invariant_where_syllable_order_is_not():
    # In <a> * <b> with A = <a>: x = b^-1 a b and y = b. The shortest-
    # representative syllable comparison has xA < yA but, after multiplying
    # by b on the left, ab A > b^2 A; a coset order must not flip like that.
    Q = free_factor_Q(2, {1})
    x, y, b = W("b-1 a1 b1"), W("b1"), W("b1")
    before = Q.contains(x.inverse() * y)
    after = Q.contains((b * x).inverse() * (b * y))
    assert before == after


def test_relconvex_sign():
    P = opposite(MagnusCone(2))
    E = free_factor_extension(P, 3)
    assert E.sign(W("a1")) == -1
    assert E.sign(W("c1")) == 1
    assert E.sign(W("c-1 a1")) == -1


def test_relconvex_conjugation_by_subgroup_keeps_q():
    Q = free_factor_Q(3, {1, 2})
    P = MagnusCone(2)
    g = W("a1 b-1")
    left = conjugate_cone(g, RelConvexCone(P, Q))
    right = RelConvexCone(conjugate_cone(g, P), Q)
    assert fingerprint(left, FreeGroup(3), 3) == fingerprint(right, FreeGroup(3), 3)


def test_lex_direct_sum_examples():
    L = lex_direct_sum_cone(MagnusCone(2))
    assert L.sign(lamp()) == 1
    f = lamp(Word(), -2) * lamp(W("a1"), 5)
    # e is below a in the Magnus order, so e decides
    assert L.sign(f) == -1
    g = lamp(Word(), -2) * lamp(W("a1"), -7)
    assert L.sign(g) == L.sign(f)
    with pytest.raises(IdentitySignError):
        L.sign(Wreath().identity)


def test_wreath_ra_examples():
    A = FiniteSet((Word(),))
    assert wreath_RA(A).sign(lamp()) == 1
    assert wreath_RA(FiniteSet()).sign(lamp()) == -1
    f = lamp(Word(), 1) * lamp(W("a1"), 1)
    assert wreath_RA(A).sign(f) == wreath_RA(FiniteSet((Word(), W("a1")))).sign(f)
    with pytest.raises(ValueError, match="off the base"):
        wreath_RA(A).sign(shifter(W("a1")))


def test_phi_examples():
    P = PhiCone(FiniteSet((Word(),)))
    assert P.sign(shifter(W("a1"))) == 1
    assert P.sign(lamp()) == 1
    assert PhiCone(FiniteSet((W("a1"),))).sign(lamp()) == -1
    assert PhiCone(CofiniteSet()).sign(lamp(W("b1"), -1)) == -1


@pytest.mark.parametrize("h", [w for w in ball(2, 3)][::7])
def test_wreath_ra_equivariance(h):
    rng = random.Random(len(h))
    A = FiniteSet(tuple(rng.sample(ball(2, 3), 4)))
    left = conjugate_cone(shifter(h), wreath_RA(A))
    right = wreath_RA(shift_action(h, A))
    assert fingerprint(left, Wreath(), 3) == fingerprint(right, Wreath(), 3)


def test_constant_cone_fails_axioms():
    rep = axioms_check(ConstantCone(FreeGroup(2)), r=2)
    assert not rep.passed
    g, gi = rep.counterexample["elements"]
    assert Word.parse(gi) == Word.parse(g).inverse()


def test_all_nontrivial_q_is_a_negative_control():
    Q = AllNontrivialQ(FreeGroup(2))
    assert Q.contains(W("a1")) and Q.contains(W("a-1"))


def test_preimage_q():
    Q = PreimageQ(a_exponent_hom(), LexSumCone(1))
    assert Q.side(W("a1 b1")) == 1
    assert Q.side(W("b1")) == 0
    assert Q.side(W("a-2 b1 a1")) == -1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_tararin_cones_distinct_at_radius_two(n):
    cones = tararin_cones(n)
    assert len({fingerprint(c, Tararin(n), 2) for c in cones}) == 2**n


@pytest.mark.parametrize(
    "cone",
    [
        MagnusCone(2),
        LexSumCone(2, (2, 1), (1, -1)),
        Z2Cone((1, 2), (0, 1)),
        KleinCone(Z2Cone((1, 1), (0, 1)), -1),
        TararinCone((1, -1, 1)),
        TararinCone((1, -1), infinite=True, span=3),
        conjugate_cone(W("a1 b1"), MagnusCone(2)),
        opposite(TararinCone((-1, 1))),
        ConstantCone(Klein(), -1),
        PhiCone(FiniteSet((Word(), W("a1")))),
        PhiCone(CofiniteSet((W("b1"),))),
        free_factor_extension(MagnusCone(2), 3),
        ses_lex_cone(a_exponent_hom(), MagnusCone(2), LexSumCone(1)),
        RelConvexCone(MagnusCone(2), free_factor_Q(None, {1, 2})),
    ],
    ids=lambda c: type(c).__name__,
)
def test_cone_json_round_trip(cone):
    back = cone_from_json(json.loads(json.dumps(cone.to_json())))
    G = cone.group if cone.group.family != "free" or cone.group.rank else FreeGroup(3)
    for g in ball_of(G, 2)[1:]:
        assert back.sign(g) == cone.sign(g)


def test_cone_json_rejects_unknown_kind():
    with pytest.raises(ValueError):
        cone_from_json({"kind": "nope"})
