"""
IRLS on a synthetic union of subspaces
======================================

Generate 15 independent 5-dimensional subspaces in R^200, corrupt 20% of
the samples, and solve the smoothed low-rank representation problem with
p = q = 1.  The trace records one line per iteration; the smoothed
objective never increases.
"""

import numpy as np

from smoothlrr import SolverConfig, gen_subspaces, solve_smoothed_lrr

ds = gen_subspaces(k=15, r=5, d=200, n_i=20, corruption_frac=0.2, noise_scale=0.1, seed=0)
print("data:", ds.X.shape, "corrupted columns:", int(ds.corrupted.sum()))

Z, trace = solve_smoothed_lrr(ds.X, SolverConfig(p=1, q=1, lam=0.5))
print(f"converged={trace.converged} after {trace.iterations} iterations, {trace.seconds:.1f} s")

print(" t        mu     J_smoothed     J_exact     max|dZ|")
for rec in trace.records[::10] + trace.records[-1:]:
    print(f"{rec.t:3d}  {rec.mu:.2e}  {rec.j_smoothed:12.5f}  {rec.j_exact:10.5f}  {rec.dz_inf:.2e}")

js = trace.column("j_smoothed")
print("objective increases along the run:", int(np.sum(np.diff(js) > 0)))
print("log10 slope of ||dZ||_F over the last 20 steps:", round(trace.log_residual_slope(), 3))

s = np.linalg.svd(Z, compute_uv=False)
print("numerical rank of Z:", int(np.sum(s > 1e-3 * s[0])), "(true union rank 75)")
