"""First-kind problems with jump-discontinuous kernels and their reduction.

The kernel is assembled from branches ``K_1, ..., K_n`` separated by curves
``s = alpha_i(t)``.  Differentiating the first-kind equation in ``t`` gives
an equivalent second-kind equation

    x(t) + sum_i b_i(t) x(alpha_i(t)) - int_0^t h(t, s) x(s) ds = f(t)

where the delay terms come from the moving breakpoints (Leibniz rule).
"""
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import ConfigError, DegenerateDiagonalError, DomainError, ModelError
from .quadrature import breakpoints_for_kernel, integrate

DIAGONAL_RTOL = 1e-12
_PROBES = 65


@dataclass(frozen=True)
class BoundaryCurve:
    value: Callable
    derivative: Callable


@dataclass(frozen=True)
class KernelBranch:
    eval: Callable
    dt: Callable


@dataclass(frozen=True)
class PiecewiseKernel:
    branches: tuple
    curves: tuple
    horizon: float

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))
        object.__setattr__(self, "curves", tuple(self.curves))
        if not self.branches:
            raise ModelError("kernel needs at least one branch")
        if len(self.branches) != len(self.curves) + 1:
            raise ModelError(
                f"{len(self.branches)} branches need {len(self.branches) - 1} curves, "
                f"got {len(self.curves)}")
        if not self.horizon > 0:
            raise ModelError("horizon T must be positive")

    @property
    def n(self):
        return len(self.branches)

    def check_curves(self, samples=_PROBES):
        """Verify alpha_i(0) = 0 and 0 < alpha_1 < ... < alpha_{n-1} < t on a grid."""
        for i, c in enumerate(self.curves, 1):
            if abs(c.value(0.0)) > 1e-14:
                raise ModelError(f"curve {i} does not start at 0")
        for q in range(1, samples + 1):
            t = self.horizon * q / samples
            prev = 0.0
            for i, c in enumerate(self.curves, 1):
                a = float(c.value(t))
                if not prev < a:
                    raise ModelError(f"curves not ordered at t={t}: curve {i}")
                if not math.isfinite(float(c.derivative(t))):
                    raise ModelError(f"curve {i} derivative not finite at t={t}")
                prev = a
            if not prev < t:
                raise ModelError(f"last curve reaches the diagonal at t={t}")


@dataclass(frozen=True)
class FirstKindProblem:
    """int_0^t K(t, s) x(s) ds = g(t) on [0, T].

    ``g`` and ``g_dt`` may be omitted when ``exact`` is known; the reduced
    right-hand side is then manufactured from the exact solution.
    """

    kernel: PiecewiseKernel
    g: Optional[Callable] = None
    g_dt: Optional[Callable] = None
    exact: Optional[Callable] = None
    name: str = "problem"

    def __post_init__(self):
        if self.g_dt is None and self.exact is None:
            raise ConfigError("need either g_dt or an exact solution")
        if self.g is not None and abs(float(self.g(0.0))) > 1e-12:
            raise ModelError("g(0) must vanish")

    @property
    def horizon(self):
        return self.kernel.horizon


def branch_index(kernel, t, s):
    """1-based branch owning (t, s); points on a curve go to the lower branch."""
    ft, fs = float(t), float(s)
    if fs < 0.0 or fs > ft:
        raise DomainError(f"(t, s) = ({ft}, {fs}) is outside 0 <= s <= t")
    for i, c in enumerate(kernel.curves, 1):
        if fs <= float(c.value(t)):
            return i
    return kernel.n


def kernel_eval(kernel, t, s):
    return kernel.branches[branch_index(kernel, t, s) - 1].eval(t, s)


@dataclass(frozen=True)
class ReducedEquation:
    """x(t) + sum_i b_i(t) x(delays[i](t)) - int_0^t h(t,s) x(s) ds = f(t)."""

    h: Callable
    delay_coeffs: tuple
    f: Callable
    delays: tuple
    horizon: float
    kernel: Optional[PiecewiseKernel] = field(default=None, repr=False)
    h_at: Optional[Callable] = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "delay_coeffs", tuple(self.delay_coeffs))
        object.__setattr__(self, "delays", tuple(self.delays))
        if len(self.delay_coeffs) != len(self.delays):
            raise ModelError("one delay coefficient per boundary curve")
        if self.h_at is None:
            h = self.h
            object.__setattr__(self, "h_at", lambda t: (lambda s: h(t, s)))

    def with_rhs(self, f):
        return ReducedEquation(self.h, self.delay_coeffs, f, self.delays,
                               self.horizon, self.kernel, self.h_at)

    @property
    def curves(self):
        return self.delays


def _check_diagonal(kernel):
    last = kernel.branches[-1]
    T = kernel.horizon
    probes = [T * q / (_PROBES - 1) for q in range(_PROBES)]
    vals = [(t, float(last.eval(t, t))) for t in probes]
    scale = max(1.0, max(abs(v) for _, v in vals))
    for t, v in vals:
        if not abs(v) >= DIAGONAL_RTOL * scale:
            raise DegenerateDiagonalError(
                f"|K_n(t,t)| = {abs(v):.3g} is below tolerance at t={t}")


def reduce(problem, rhs="auto", quad_points=20):
    """Differentiate the first-kind equation into second-kind form.

    ``rhs`` selects how f is obtained: ``"g_dt"`` uses g'(t)/K_n(t,t),
    ``"manufactured"`` applies the reduced operator to the exact solution,
    ``"auto"`` prefers g_dt when present.
    """
    kernel = problem.kernel
    _check_diagonal(kernel)
    branches = kernel.branches
    curves = kernel.curves
    last = branches[-1]

    def h(t, s):
        return -branches[branch_index(kernel, t, s) - 1].dt(t, s) / last.eval(t, t)

    def h_at(t):
        # h(t, .) with the curve positions and the diagonal value hoisted
        ft = float(t)
        alphas = [float(c.value(t)) for c in curves]
        diag = last.eval(t, t)

        def hs(s):
            fs = float(s)
            if fs < 0.0 or fs > ft:
                raise DomainError(f"(t, s) = ({ft}, {fs}) is outside 0 <= s <= t")
            i = 0
            for a in alphas:
                if fs <= a:
                    break
                i += 1
            return -branches[i].dt(t, s) / diag
        return hs

    def make_b(i):
        lower, upper, curve = branches[i], branches[i + 1], curves[i]

        def b(t):
            a = curve.value(t)
            return (lower.eval(t, a) - upper.eval(t, a)) * curve.derivative(t) / last.eval(t, t)
        return b

    delay_coeffs = tuple(make_b(i) for i in range(len(curves)))

    if rhs == "auto":
        rhs = "g_dt" if problem.g_dt is not None else "manufactured"
    if rhs == "g_dt":
        if problem.g_dt is None:
            raise ConfigError("problem has no g_dt")

        def f(t):
            return problem.g_dt(t) / last.eval(t, t)
    elif rhs != "manufactured":
        raise ConfigError(f"unknown rhs mode {rhs!r}")
    else:
        f = None

    reduced = ReducedEquation(h, delay_coeffs, f, curves, kernel.horizon, kernel, h_at)
    if f is None:
        reduced = reduced.with_rhs(
            lambda t: manufactured_rhs(problem, reduced, t, quad_points))
    return reduced


def manufactured_rhs(problem, reduced, t, quad_points=20):
    """f(t) = x*(t) + sum b_i x*(alpha_i(t)) - int_0^t h x* ds for known x*."""
    if problem.exact is None:
        raise ConfigError("manufactured right-hand side needs an exact solution")
    x = problem.exact
    total = x(t)
    for b, c in zip(reduced.delay_coeffs, reduced.delays):
        total = total + b(t) * x(c.value(t))
    if float(t) > 0.0:
        zero = t * 0.0
        interval = breakpoints_for_kernel(reduced, t, zero, t)
        hs = reduced.h_at(t)
        total = total - integrate(lambda s: hs(s) * x(s), interval,
                                  quad_points, refine=2)
    return total
