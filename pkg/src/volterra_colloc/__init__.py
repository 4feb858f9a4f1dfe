"""Spline collocation for first-kind Volterra equations with piecewise kernels."""
from .collocation import CollocationSolution, gauss_jordan_solve, solve, sup_error
from .config import ProblemConfig, load_config, parse_config
from .driver import (ConvergenceReport, StabilityReport, StopRule, adaptive_solve,
                     convergence_study, stability_study)
from .errors import (ConfigError, DegenerateDiagonalError, DomainError, EvaluationError,
                     ModelError, ParameterError, SingularSystemError,
                     UnreliableDivisionError, VolterraError)
from .expr import eval_expression, parse_expression
from .problem import (BoundaryCurve, FirstKindProblem, KernelBranch, PiecewiseKernel,
                      ReducedEquation, reduce)
from .problems import constant_kernel, example1, example2
from .quadrature import integrate, legendre_rule
from .spline import LocalSpline, interpolate
from .stochastic import (RoundingContext, StochasticScalar, ncsd_estimate, ncsd_pair,
                         random_round)

__version__ = "0.1.0"
