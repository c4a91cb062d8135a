# # Positive cones as sign oracles
#
# A left-ordering of a group is stored as a function that returns +1 or -1 for
# every non-identity element. g < h exactly when g^-1 h is positive.

# %%
from ordspace import MagnusCone, fingerprint, axioms_check
from ordspace.cones import KleinCone, TararinCone, Z2Cone, conjugate_cone, opposite
from ordspace.groups import FreeGroup, Klein, Tararin
from ordspace.words import Word

W = Word.parse
M = MagnusCone(2)
for w in ["a1", "b1", "a-1 b1", "a1 b1 a-1 b-1"]:
    print(f"{w:>16}  {M.sign(W(w)):+d}")

# %% [markdown]
# Finite checks work on a ball of words. The axioms check tests that exactly
# one of g, g^-1 is positive and that positives are closed under products.

# %%
print(axioms_check(M, FreeGroup(2), r=3).to_dict())
print(axioms_check(TararinCone((1, -1, 1)), r=3).to_dict())

# %% [markdown]
# A fingerprint is the bit pattern of signs on the ball minus the identity.
# Two cones that agree on a ball share a fingerprint there.

# %%
fp = fingerprint(M, FreeGroup(2), 2)
print(fp.hex())
print(fingerprint(opposite(M), FreeGroup(2), 2) == fp.complement())

# %% [markdown]
# Conjugation moves cones around. The Magnus order is bi-invariant, so it is
# fixed; a Klein cone is not, and the z generator reverses its lattice part.

# %%
print(fingerprint(conjugate_cone(W("a1 b-1"), M), FreeGroup(2), 3) == fingerprint(M, FreeGroup(2), 3))
K = KleinCone(Z2Cone((2, 1), (0, 1)), 1)
print(fingerprint(K, Klein(), 2).hex())
print(fingerprint(conjugate_cone((0, 0, 1), K), Klein(), 2).hex())
