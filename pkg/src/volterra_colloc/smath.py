"""Elementary functions that accept plain floats or stochastic scalars.

User-supplied kernels, curves and solutions are written against these so
that the same callables run under ordinary and stochastic arithmetic.
"""
import math

from .stochastic import StochasticScalar

__all__ = ["exp", "log", "sqrt", "sin", "cos", "pi"]

pi = math.pi


def exp(x):
    return x.exp() if isinstance(x, StochasticScalar) else math.exp(x)


def log(x):
    return x.log() if isinstance(x, StochasticScalar) else math.log(x)


def sqrt(x):
    return x.sqrt() if isinstance(x, StochasticScalar) else math.sqrt(x)


def sin(x):
    return x.sin() if isinstance(x, StochasticScalar) else math.sin(x)


def cos(x):
    return x.cos() if isinstance(x, StochasticScalar) else math.cos(x)
