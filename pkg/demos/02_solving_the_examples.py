"""
Solving first-kind equations with jumping kernels
=================================================

Both test problems have a kernel made of three smooth pieces separated by
the lines s = alpha_1(t) and s = alpha_2(t).  Differentiating turns the
equation into a second-kind one with delay terms x(alpha_i(t)); the spline
collocation solves that one segment at a time.
"""
import time

from volterra_colloc import convergence_study, example1, example2, reduce, solve, sup_error

# %%
# Example 1 on [0, 1] with exact solution t sin t.
ex1 = example1()
red = reduce(ex1)
print("b_1(0.5) =", red.delay_coeffs[0](0.5), " b_2(0.5) =", red.delay_coeffs[1](0.5))

sol = solve(red, N=5, r=5)
print(f"N=5, r=5: sup error {sup_error(sol, ex1.exact):.3e}, "
      f"largest row residual {sol.residual_norm:.1e}")

# %%
# Error tables.  Each doubling of N divides the error by about 2^r.
for problem, r in ((ex1, 4), (ex1, 5), (example2(), 5)):
    t0 = time.perf_counter()
    table = convergence_study(problem, r, [1, 5, 10, 20, 50])
    print(f"\n{problem.name}, r={r}  ({time.perf_counter() - t0:.2f}s)")
    for N, e in zip(table.Ns, table.errors):
        print(f"  N={N:<3d} {e:.3e}")
    print(f"  fitted order {table.order:.2f}")

# %%
# Higher degree reaches double-precision level quickly.
for r in (7, 10):
    print(f"r={r}, N=5: {sup_error(solve(red, 5, r), ex1.exact):.2e}")
