"""
Optimal interpolation on the Poisson problem
============================================

On an SPD matrix the A-norm of the two-grid error with the optimal coarse
space is known in closed form: it is ``1 - lambda_{nc+1}``, where the
lambdas are the generalized eigenvalues of ``(A, M~)``. This script checks
that on a 4x4 grid and compares against ideal interpolation.
"""

# %%
import numpy as np

from optamg import (
    anorm_of_operator,
    cf_split_every_other,
    generalized_eig,
    ideal_interpolation,
    kaczmarz_smoother,
    optimal_interpolation,
    poisson_2d,
    two_grid_error,
)

a = poisson_2d(4).toarray()
sm = kaczmarz_smoother(a)
spec = generalized_eig(a, sm.m_sym)
print("pencil eigenvalues:", np.round(spec.values, 4))

# %%
# The identity uses the plain Kaczmarz matrix M as the smoother.
print(" n_c   ||E||_A^2   1 - lambda_next")
for n_c in (2, 4, 8, 12):
    e = two_grid_error(a, sm.m, optimal_interpolation(spec, n_c))
    print(f"{n_c:4d}   {anorm_of_operator(e, a) ** 2:.6f}    {1 - spec.values[n_c]:.6f}")

# %%
# Ideal interpolation with every other point as a C-point uses 8 coarse
# points. The optimal space of the same size does at least as well.
split = cf_split_every_other(16)
e_ideal = two_grid_error(a, sm.m, ideal_interpolation(a, split))
e_opt = two_grid_error(a, sm.m, optimal_interpolation(spec, len(split.c_indices)))
print(f"ideal:   {anorm_of_operator(e_ideal, a):.4f}")
print(f"optimal: {anorm_of_operator(e_opt, a):.4f}")
