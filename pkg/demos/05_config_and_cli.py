"""
Describing a new problem in a config file
=========================================

Kernels, curves and solutions are arithmetic expressions in t and s.  The
same file drives the library and the ``volterra-colloc`` command.
"""
import pathlib
import subprocess
import sys

from volterra_colloc import load_config, reduce, solve, sup_error
from volterra_colloc.expr import parse_expression, to_string

here = pathlib.Path(__file__).parent

# %%
ast = parse_expression("exp(2-t)*t^2")
print("parsed:", to_string(ast))

# %%
cfg = load_config(here / "configs" / "jump.cfg")
problem = cfg.to_problem()
sol = solve(reduce(problem), N=8, r=5)
print(f"{cfg.name}: sup error {sup_error(sol, problem.exact):.3e}")

# %%
# The command line reads the same file.
cmd = [sys.executable, "-m", "volterra_colloc", "converge",
       "--config", str(here / "configs" / "jump.cfg"), "--Ns", "2,4,8,16"]
print(subprocess.run(cmd, capture_output=True, text=True).stdout)
