"""
Choosing N with stochastic arithmetic
=====================================

Refining the mesh until |x_N(t) - x_{N-1}(t)| < eps needs a good eps, and a
too small one never triggers: the differences stall at the level of
rounding noise.  Running the solver under random rounding instead tells us
when the difference itself is noise (an "informatical zero", printed @.0).
"""
from volterra_colloc import RoundingContext, StopRule, adaptive_solve, example1, reduce
from volterra_colloc.stochastic import ncsd_estimate

ex1 = example1()
red = reduce(ex1)

# %%
# A stochastic scalar carries three samples of the same computation.
# Summing 0.1 ten thousand times in single precision loses digits, and the
# spread of the samples says how many survive.
ctx = RoundingContext(seed=1, precision="single")
acc = ctx.exact(0.0)
for _ in range(10_000):
    acc = acc + 0.1
print("samples:", acc.samples)
print(f"mean {acc.mean:.6f}, reliable digits {ncsd_estimate(acc).value:.2f}")
print("acc - 1000 =", acc - 1000.0)

# %%
# Floating point with eps = 1e-14: no stop by N = 10.
fpa = adaptive_solve(ex1, 5, StopRule("fpa", epsilon=1e-14), reduced=red)
for row in fpa.rows[1:]:
    print(f"FPA N={row.N:2d}  diff {row.diff:.3e}")
print("FPA stopped:", fpa.converged)

# %%
# Stochastic mode finds the point where refinement stops helping.
for r in (5, 10):
    rep = adaptive_solve(ex1, r, StopRule("sa", seed=0), reduced=red)
    print(f"\nr={r}")
    for row in rep.rows[1:]:
        shown = "@.0" if row.informatical_zero else f"{row.diff:.3e}"
        print(f"  N={row.N:2d}  x_N(0.05)={row.value:.7e}  diff {shown}")
    print(f"  N_opt={rep.N_opt}  error_opt={rep.error_opt}")

# %%
# The verdict depends on the random stream; a sweep shows the spread.
counts = {}
for seed in range(20):
    n = adaptive_solve(ex1, 5, StopRule("sa", seed=seed), reduced=red).N_opt
    counts[n] = counts.get(n, 0) + 1
print("\nN_opt over 20 seeds:", dict(sorted(counts.items())))
