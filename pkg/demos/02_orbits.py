# # Conjugation orbits
#
# Breadth-first search over generator conjugations, deduplicated by
# fingerprint. A closed search is a lower bound on the true orbit at that
# radius, never a proof of finiteness.

# %%
from ordspace import finite_orbit_probe, orbit_explore
from ordspace.cones import KleinCone, MagnusCone, Z2Cone
from ordspace.dynamics import e0_class, flip_orbit, tararin_cones, tinf_action, tinf_encode
from ordspace.groups import Tararin
from ordspace.dynamics import fingerprint

print(orbit_explore(MagnusCone(2), r=3).summary())
print(orbit_explore(KleinCone(Z2Cone((1, 3), (0, 1)), -1), r=3).summary())
print(finite_orbit_probe(KleinCone(), r=3))

# %% [markdown]
# The tower groups have finitely many orderings, one per sign vector, and all
# of them have distinct fingerprints already at radius 2.

# %%
for n in range(1, 6):
    cones = tararin_cones(n)
    print(n, len(cones), len({fingerprint(c, Tararin(n), 2) for c in cones}))

# %% [markdown]
# In the infinite tower a cone is coded by a binary sequence. Conjugating by
# x_j flips bit j-1, so orbits are classes of sequences that agree from some
# point on.

# %%
eps = (0, 1, 1, 0)
print(tinf_action(3, eps))
print(sorted(flip_orbit(eps)) == sorted(e0_class(eps, len(eps))))
g = orbit_explore(tinf_encode(eps, span=5), r=1)
print(g.summary())
