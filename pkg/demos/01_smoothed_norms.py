"""
Smoothed norms and their weights
================================

The IRLS solver never touches a nonsmooth norm directly.  Each norm is
replaced by a mu-smoothed version whose gradient is a weighted linear map,
and mu is shrunk over the iterations.  This script shows how close the
smoothed values get to the exact ones.
"""

import numpy as np

from smoothlrr.norms import (
    l2q_norm,
    schatten_p,
    smoothed_group_lasso,
    smoothed_l2q,
    smoothed_schatten,
    weight_group_lasso,
)

rng = np.random.default_rng(0)
Z = rng.standard_normal((6, 6))
E = rng.standard_normal((4, 6))

# Schatten-p: sum of singular values to the p-th power
for p in (0.5, 1.0, 1.5):
    print(f"p={p}: exact {schatten_p(Z, p):.6f}")
    for mu in (1.0, 1e-2, 1e-4):
        print(f"    mu={mu:g}  smoothed {smoothed_schatten(Z, p, mu):.6f}")

# column-wise l2,q: the gap closes at rate n * mu^q for q <= 1
q = 1.0
for mu in (1.0, 1e-2, 1e-4):
    gap = smoothed_l2q(E, q, mu) - l2q_norm(E, q)
    print(f"l2,1 gap at mu={mu:g}: {gap:.2e} (bound {E.shape[1] * mu**q:.2e})")

# group sparsity on a vector: weights are constant inside each group
z = rng.standard_normal(7)
groups = [[0, 1, 2], [3, 4], [5, 6]]
print("group penalty:", smoothed_group_lasso(z, groups, 1.0, 1e-3))
print("group weights:", np.round(weight_group_lasso(z, groups, 1.0, 1e-3), 4))
