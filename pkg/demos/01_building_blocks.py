"""
Building blocks: Gauss rules and local splines
==============================================

The solver rests on two pieces: compound Gauss-Legendre quadrature that
splits integrals where the kernel jumps, and piecewise Lagrange polynomials
whose nodes are the segment ends plus the Legendre roots inside.
"""
import math

import numpy as np

from volterra_colloc.quadrature import BreakpointedInterval, integrate, legendre_rule
from volterra_colloc.spline import interpolate, make_nodes

# %%
# An m-point rule is exact for polynomials up to degree 2m-1.
rule = legendre_rule(3)
print("3-point nodes  ", np.round(rule.nodes, 12))
print("3-point weights", np.round(rule.weights, 12))

# %%
# A kink at s = 0.5 spoils a single rule, but splitting there restores
# exactness piece by piece.
kink = lambda s: abs(s - 0.5)
whole = integrate(kink, BreakpointedInterval(0.0, 1.0), 2)
split = integrate(kink, BreakpointedInterval(0.0, 1.0, (0.5,)), 2)
print(f"|s-0.5| on [0,1]: unsplit {whole:.6f}, split {split:.6f} (exact 0.25)")

# %%
# Nodes of a 3-segment, r=5 mesh on [0, 1].
for seg in make_nodes(1.0, 3, 5):
    print(seg.k, np.round(seg.xi, 4))

# %%
# Interpolating t sin t shows the N^-r error law the solver inherits.
f = lambda t: t * math.sin(t)
grid = np.linspace(0, 1, 1000)
for r in (3, 4, 5):
    errs = []
    for N in (5, 10, 20, 40):
        sp = interpolate(f, 1.0, N, r)
        errs.append(max(abs(sp(t) - f(t)) for t in grid))
    slope = np.polyfit(np.log([5, 10, 20, 40]), np.log(errs), 1)[0]
    print(f"r={r}: errors {['%.2e' % e for e in errs]}  slope {slope:.2f}")
