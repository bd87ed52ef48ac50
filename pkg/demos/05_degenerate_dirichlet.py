"""A Dirichlet problem whose coefficient vanishes at the boundary.

The problem -(b^2 v')' = f on (0, 1) with v(0) = v(1) = 0 is solved weakly
for b(x) = x^{1/4}. The form a[u, v] has no coercivity constant, yet the
weak solution exists: it is the minimum-norm least-squares solution of
T v = g with T u = b u'. A Poincare-type inequality holds with constant
C = (int c^{-2})^{1/2} whenever b >= c and that integral is finite.
"""

import numpy as np

from embedded_triplets import dirichlet as dr
from embedded_triplets.errors import NoSolution

# %% a single solve, with the energy identity as a certificate
grid = dr.Grid1D(64)
fld = dr.field_from_preset(grid, "pow:0.25")
prob = dr.DirichletProblem(grid, fld)
g = dr.manufactured_load(grid, "pow:0.25", "sine", sampling="cell_average")
sol = prob.solve(g)
print(f"max nodal error vs sin(pi x): {np.max(np.abs(sol.v - np.sin(np.pi * grid.nodes))):.2e}")
print(f"a[v, v] = {dr.form_a(grid, fld, sol.v, sol.v).real:.12f}, "
      f"||f||^2 = {prob.functional_norm(g) ** 2:.12f}")

# %% refinement study
study = dr.convergence_study("pow:0.25", "quadratic", [16, 32, 64, 128, 256, 512, 1024],
                             sampling="cell_average")
for row in study.rows():
    print(f"n={row['n']:5d}  error={row['max_error']:.3e}  order={row['observed_order']:.3f}")

# %% the inequality constant and its divergence for b = x
for n in (64, 256, 1024, 4096):
    print(f"n={n:5d}  C(x^(1/4)) = {dr.check_conditions(dr.field_from_preset(dr.Grid1D(n), 'pow:0.25')).C:.5f}")
print("sqrt(2) =", np.sqrt(2))
growth = dr.c4_growth("linear", [256, 512, 1024, 2048, 4096])
print("int x^-2 by midpoint rule:", [round(v, 1) for v in growth.integrals], "diverging:", growth.diverging)

# %% a dead interval: b = 0 on two cells leaves a kernel direction
b = np.ones(6)
b[[1, 4]] = 0.0
dead = dr.DirichletProblem(dr.Grid1D(5), dr.CoefficientField(dr.Grid1D(5), b))
try:
    dead.representative_from_load(np.array([0.0, 1.0, 0.0, 0.0, 0.0]))
except NoSolution as exc:
    print("load rejected; offending direction:", np.round(exc.direction, 3))
