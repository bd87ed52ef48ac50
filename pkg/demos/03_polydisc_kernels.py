"""Dirichlet-type spaces on the bidisc.

Functions are power series truncated to a box of multi-indices. The weight
(k+1)^alpha defines D_alpha; alpha = 0 is the Hardy space. The reproducing
kernel evaluates functions through an inner product, the triplet
(D_alpha; H^2; D_-alpha) has diagonal Hamiltonian with entries (k+1)^alpha,
and the Hilbert-Schmidt partial sums show when the kernel operator fails to
be Hilbert-Schmidt.
"""

import numpy as np

from embedded_triplets import polydisc as pd

sp = pd.PolydiscSpace(alpha=(1.0, -1.0), max_deg=2)

# %% reproducing property: <f, K_w> = f(w)
f = sp.monomial((1, 2))
w = np.array([0.3, 0.5])
print("f(w) by evaluation  :", f(w))
print("f(w) via the kernel :", pd.reproduce(sp, f, w))

# %% the Hardy kernel and its truncation error
hardy = pd.PolydiscSpace((0.0, 0.0), 20)
w = z = np.array([0.5, 0.5])
err = abs(pd.kernel_eval(hardy, w, z) - pd.hardy_kernel(w, z))
print(f"truncated vs closed-form Hardy kernel: error {err:.2e}, bound "
      f"{pd.truncation_tail_bound(2, 20, w, z):.2e}")

# %% spectrum of the Hamiltonian
tr, rep = pd.polydisc_triplet(sp)
print("sigma(H):", [round(v, 4) for v in rep.spectrum_h])
print("cond(T) for growing truncation:",
      [round(pd.polydisc_triplet(pd.PolydiscSpace((1.0, -1.0), d))[1].cond, 3) for d in (1, 2, 4, 8)])

# %% Hilbert-Schmidt partial sums in one variable
for alpha in (2.0, 0.25, 0.0):
    s = pd.hs_diagnostic(pd.PolydiscSpace((alpha,), 4000))
    print(f"alpha={alpha}: S_10={s[10]:.4f}  S_100={s[100]:.4f}  S_4000={s[4000]:.4f}")
print("pi^4/90 =", np.pi**4 / 90)
