"""
How the smoothing schedule drives iteration counts
==================================================

mu starts at mu_c * ||X||_2 and is divided by rho after every iteration.
Starting smoother (larger mu_c) costs iterations; shrinking faster
(larger rho) saves them.  The final objective barely moves.
"""

from smoothlrr import SolverConfig, gen_subspaces, solve_smoothed_lrr

ds = gen_subspaces(k=10, r=5, d=100, n_i=15, corruption_frac=0.2, noise_scale=0.1, seed=0)

print("mu_c    rho   iterations   final J")
for mu_c, rho in [(0.01, 1.1), (0.1, 1.1), (1.0, 1.1), (0.1, 1.05), (0.1, 1.5)]:
    _, trace = solve_smoothed_lrr(ds.X, SolverConfig(lam=0.5, mu_c=mu_c, rho=rho))
    print(f"{mu_c:<6} {rho:<5} {trace.iterations:10d}   {trace.records[-1].j_exact:.4f}")

# the trace is plain JSON lines, ready for any plotting tool
print(trace.to_jsonl().splitlines()[0])
