"""Operator-range spaces from a single matrix.

A factor T gives two renormed spaces: D(T), where a vector is measured by
|x|_T = ||T x||, and R(T), where a range element is measured by the length of
its shortest preimage. The dual of D(T) with respect to the Euclidean pairing
is R(T^*). This script computes each norm in closed form and compares it with
a brute-force supremum over a deterministic grid of directions.
"""

import numpy as np

from embedded_triplets.spaces import (
    DSpace,
    RSpace,
    d_norm,
    dual_norm,
    dual_norm_oracle,
    range_norm_oracle,
    range_test,
)

T = np.diag([1.0, 2.0])
D = DSpace.from_factor(T)
R = RSpace.from_factor(T)

# %% the plus norm is just the length of T x
x = np.array([1.0, 1.0])
print(f"|x|_T for x = {x}: {d_norm(D, x):.6f}  (sqrt(5) = {np.sqrt(5):.6f})")

# %% the dual norm: closed form through the pseudo-inverse of T^*, and by brute force
for y in (np.array([0.0, 1.0]), np.array([1.0, 0.0]), np.array([1.0, 1.0])):
    closed = dual_norm(D, y)
    sampled = dual_norm_oracle(D, y, grid_density=2000)
    print(f"||y||_(T*) for y = {y}: closed {closed:.6f}, sampled sup {sampled:.6f}")

# %% range membership and the minimal-preimage norm
for u in (np.array([0.0, 2.0]), np.array([1.0, 2.0])):
    res = range_test(R, u)
    print(f"u = {u}: member={res.member}, ||u||_T = {res.norm:.6f}, "
          f"sup-characterization {range_norm_oracle(R, u, 2000):.6f}")

# %% a rank-deficient factor: only the range is measured, the rest is rejected
S = RSpace.from_factor(np.diag([1.0, 0.0]))
print("(1, 0) in range of diag(1, 0):", range_test(S, np.array([1.0, 0.0])).member)
print("(0, 1) in range of diag(1, 0):", range_test(S, np.array([0.0, 1.0])).member)
