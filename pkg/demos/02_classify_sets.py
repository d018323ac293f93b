"""Which disentangling machine applies to a set of states."""

# %%
from qdisent import catalog
from qdisent.disentangle import classify

# %% [markdown]
# The classifier checks four sufficient conditions in a fixed order
# and picks the first machine whose condition holds.

# %%
for name in catalog.names():
    entry = catalog.get(name)
    c = classify(entry.set)
    print(f"{name:12s} -> {c.selected_machine.value}")
    print(f"    distinguishable={c.perfectly_distinguishable}"
          f"  same marginals={c.identical_marginals}"
          f"  commuting B={c.commuting_marginals_B}  commuting A={c.commuting_marginals_A}")

# %% [markdown]
# Sets can also be built from your own states.

# %%
from qdisent.disentangle import StateSet
from qdisent.entanglement import BipartiteState

up = BipartiteState.from_vector([1, 0, 0, 0], (2, 2))
down = BipartiteState.from_vector([0, 0, 0, 1], (2, 2))
s = StateSet.from_states("mine", [("up", up), ("down", down)])
print(classify(s).selected_machine.value)
