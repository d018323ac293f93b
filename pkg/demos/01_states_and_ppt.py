"""Bipartite states, marginals and the partial-transpose test."""

# %%
import math

import numpy as np

from qdisent.entanglement import BipartiteState, is_ppt, is_separable, marginals, negativity, pt_eigenvalues

np.set_printoptions(precision=4, suppress=True)

# %% [markdown]
# Rows are ordered A-major: |00>, |01>, |10>, |11>.

# %%
r = 1 / math.sqrt(2)
phi_plus = BipartiteState.from_vector([r, 0, 0, r], (2, 2))
rho_a, rho_b = marginals(phi_plus)
print("marginal A\n", rho_a.real)
print("marginal B\n", rho_b.real)

# %% [markdown]
# The partial transpose of Phi+ has one negative eigenvalue, so it is entangled.

# %%
print("PT spectrum", pt_eigenvalues(phi_plus).real)
print("negativity", negativity(phi_plus))
print("PPT?", is_ppt(phi_plus))

# %% [markdown]
# Mixing with white noise: p Phi+ + (1 - p) 1/4 stays entangled until p = 1/3.

# %%
for p in (0.2, 1 / 3, 0.5, 0.9):
    w = BipartiteState(p * phi_plus.rho + (1 - p) * np.eye(4) / 4, (2, 2))
    print(f"p={p:.3f}  negativity={negativity(w):.4f}  separable={is_separable(w)}")
