"""Broadcasting one subsystem removes entanglement but keeps both marginals."""

# %%
import numpy as np

from qdisent import catalog, linalg
from qdisent.disentangle import broadcast_unitary, disentangle_to_separable, local_broadcast
from qdisent.entanglement import is_product, is_separable, negativity

np.set_printoptions(precision=4, suppress=True)

# %% [markdown]
# The broadcast unitary acts on B and a fresh ancilla in |0>.

# %%
print(broadcast_unitary())

# %% [markdown]
# For a state whose B marginal is diagonal, the output is the input
# with every coherence between different B basis states dropped.

# %%
s = catalog.random_prop2_state(7)
out = local_broadcast(s, "B")
print("input\n", s.rho)
print("output\n", out.rho)
for party in "AB":
    print(party, "marginal change", linalg.frobenius(s.marginal(party) - out.marginal(party)))
print("negativity", negativity(out))

# %% [markdown]
# The two-member set with a Bell state: the entangled member becomes a
# classical mixture, separable but not a product.

# %%
eq4 = catalog.eq4_set()
out = disentangle_to_separable(eq4, eq4["psi2"])
print(out.rho.real)
print("separable", is_separable(out), " product", is_product(out))
