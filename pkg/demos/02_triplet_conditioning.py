"""How a triplet degrades as the factor becomes ill-conditioned.

In infinite dimensions the interesting triplets come from unbounded
Hamiltonians. At desk scale that is modelled by a family of factors whose
condition number grows. verify() measures how far the numerical maps are
from being unitary; the residuals should grow no faster than cond(T) times
machine epsilon.
"""

import numpy as np

from embedded_triplets.triplet import condition_sweep, from_factor, swap, verify

eps = np.finfo(float).eps
conds = [1e0, 1e2, 1e4, 1e6, 1e8]

print(f"{'cond':>8}  {'worst residual':>15}  {'/ (eps*cond)':>12}")
for row in condition_sweep(dim=20, conds=conds, seed=0):
    worst = max(v for k, v in row.items() if k.endswith("_defect") or k == "dual_residual")
    print(f"{row['cond']:8.1e}  {worst:15.3e}  {worst / (eps * row['cond']):12.2f}")

# %% the mirror triplet exchanges the Hamiltonian and the kernel operator
tr = from_factor(np.diag([1.0, 2.0, 4.0]))
sw = swap(tr)
print("H of the swapped triplet:", np.round(np.diag(sw.hamiltonian.entries), 6))
print("A of the original       :", np.round(np.diag(tr.kernel.entries), 6))
print("swapped triplet passes verify():", verify(sw).passed)
