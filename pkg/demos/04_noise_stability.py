"""
Sensitivity to noisy data
=========================

First-kind equations are ill-posed: perturbing the data changes the
solution more than the data.  Here every evaluation of the reduced right
side f gets uniform noise in (-delta, delta).
"""
from volterra_colloc import example1, example2, stability_study

deltas = [0.0, 1e-5, 1e-4, 1e-3, 1e-2]
for problem in (example1(), example2()):
    rep = stability_study(problem, N=5, r=5, deltas=deltas, seed=0, trials=10)
    print(problem.name, "(median of 10 trials)")
    for d, e in zip(rep.deltas, rep.errors):
        gain = f"  error/delta {e / d:.1f}" if d else ""
        print(f"  delta={d:.0e}  error={e:.3e}{gain}")
