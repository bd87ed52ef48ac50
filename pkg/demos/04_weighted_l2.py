"""Weighted L^2 on a finite measure space.

With measure mu and weight omega the triplet is
(L^2_omega; L^2; L^2_{1/omega}). Its Hamiltonian is multiplication by omega,
so its spectrum is the set of values omega takes. The concrete pairing
sum f conj(g) mu agrees with the abstract Theta pairing.
"""

import numpy as np

from embedded_triplets.triplet import verify
from embedded_triplets.weighted import (
    WeightedSpace,
    theta_abstract,
    theta_weighted,
    weighted_triplet,
    wnorm,
)

ws = WeightedSpace(mu=np.array([1.0, 0.5, 2.0]), omega=np.array([2.0, 3.0, 4.0]))
tr, rep = weighted_triplet(ws)
print("sigma(H) =", rep.spectrum_h)
print("sigma(A) =", [round(v, 6) for v in rep.spectrum_a])

rng = np.random.default_rng(0)
f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
g = rng.standard_normal(3) + 1j * rng.standard_normal(3)
print("concrete pairing:", np.round(theta_weighted(ws, g, f), 12))
print("abstract pairing:", np.round(theta_abstract(ws, tr, g, f), 12))
print("minus norm, concrete vs abstract:", wnorm(ws, g, "minus"), tr.minus_norm(ws.to_h0(g)))

# %% a weight that is nearly degenerate: the triplet still builds
extreme = WeightedSpace(np.ones(3), np.array([1e-8, 1.0, 1e8]))
tr_x, rep_x = weighted_triplet(extreme)
report = verify(tr_x)
print(f"cond(T) = {rep_x.cond:.1e}, worst residual {max(report.residuals().values()):.2e}")
