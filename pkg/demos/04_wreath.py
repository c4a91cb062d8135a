# # Subsets of F2 as orderings of a wreath product
#
# Each subset A of F2 gives a cone phi(A) on Z wr F2. Shifting A by h matches
# conjugating phi(A) by the shift element (0, h).

# %%
from ordspace.cones import PhiCone, conjugate_cone
from ordspace.dynamics import fingerprint, orbit_explore
from ordspace.groups import Wreath, shifter
from ordspace.reductions import refutation_probe
from ordspace.sets import FiniteSet, shift_action
from ordspace.words import Word, ball

W = Word.parse
A = FiniteSet((Word(), W("a1"), W("b1 a-1")))
h = W("b1 a1")
left = fingerprint(PhiCone(shift_action(h, A)), Wreath(), 3)
right = fingerprint(conjugate_cone(shifter(h), PhiCone(A)), Wreath(), 3)
print(left == right)

# %% [markdown]
# Small fingerprints see little of A. At radius 2 the only base elements in the
# ball are powers of the lamp at e, so two sets that both contain e look alike
# and the identity already matches them.

# %%
B = FiniteSet((Word(), W("b1 b1")))
print(refutation_probe(PhiCone(A), PhiCone(B), Wreath(), 2, 3).to_dict())
print(refutation_probe(PhiCone(A), PhiCone(B), Wreath(), 3, 1).to_dict()["status"])

# %%
print(orbit_explore(PhiCone(A), r=2, max_nodes=32).summary())
