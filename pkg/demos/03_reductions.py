# # Transporting cones between groups
#
# A reduction witness maps cones of one group to cones of another and
# conjugators to conjugators. The equivariance suite checks, on samples, that
# conjugating then mapping agrees with mapping then conjugating.

# %%
from ordspace.reductions import WITNESSES, equivariance_suite, get_witness, sidon_prefix

for name in sorted(WITNESSES):
    w = get_witness(name)
    rep = equivariance_suite(w, w.samples(16, seed=0))
    print(f"{name:>20}  {rep.status}  {rep.failures}/{len(rep.results)}")

# %% [markdown]
# The deliberately corrupted witness is there to show the suite can fail.

# %%
w = get_witness("selftest-corrupted")
rep = equivariance_suite(w, w.samples(16, seed=0))
print(next(x for x in rep.results if x["status"] != "pass"))

# %% [markdown]
# The embedding of infinitely generated free groups into F2 uses exponents
# with pairwise distinct differences, built greedily.

# %%
print(sidon_prefix(12))
