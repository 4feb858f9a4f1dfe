"""Built-in test problems with known exact solutions."""
from .problem import BoundaryCurve, FirstKindProblem, KernelBranch, PiecewiseKernel, kernel_eval
from .quadrature import breakpoints_for_kernel, integrate
from .smath import cos, exp, sin


def _first_kind_rhs(kernel, exact, quad_points=20):
    def g(t):
        if float(t) == 0.0:
            return 0.0 * t
        interval = breakpoints_for_kernel(kernel, t, 0.0 * t, t)
        return integrate(lambda s: kernel_eval(kernel, t, s) * exact(s), interval,
                         quad_points, refine=2)
    return g


def example1():
    """Three branches on [0, 1]: t+s, ts, e^s split at t/2 and 2t/3; x* = t sin t."""
    kernel = PiecewiseKernel(
        branches=(
            KernelBranch(lambda t, s: t + s, lambda t, s: 1.0),
            KernelBranch(lambda t, s: t * s, lambda t, s: s),
            KernelBranch(lambda t, s: exp(s), lambda t, s: 0.0),
        ),
        curves=(
            BoundaryCurve(lambda t: t / 2.0, lambda t: 0.5),
            BoundaryCurve(lambda t: 2.0 * t / 3.0, lambda t: 2.0 / 3.0),
        ),
        horizon=1.0,
    )

    def exact(t):
        return t * sin(t)
    return FirstKindProblem(kernel, g=_first_kind_rhs(kernel, exact), exact=exact,
                            name="example1")


def example2():
    """Three branches on [0, 2]: (t-s)^2, cos s, 1+sin 2s split at t/3 and 3t/4."""
    kernel = PiecewiseKernel(
        branches=(
            KernelBranch(lambda t, s: (t - s) * (t - s), lambda t, s: 2.0 * (t - s)),
            KernelBranch(lambda t, s: cos(s), lambda t, s: 0.0),
            KernelBranch(lambda t, s: 1.0 + sin(2.0 * s), lambda t, s: 0.0),
        ),
        curves=(
            BoundaryCurve(lambda t: t / 3.0, lambda t: 1.0 / 3.0),
            BoundaryCurve(lambda t: 3.0 * t / 4.0, lambda t: 0.75),
        ),
        horizon=2.0,
    )

    def exact(t):
        return exp(2.0 - t) * t * t
    return FirstKindProblem(kernel, g=_first_kind_rhs(kernel, exact), exact=exact,
                            name="example2")


def constant_kernel(T=1.0):
    """K = 1, g = t, so x = 1."""
    kernel = PiecewiseKernel(
        branches=(KernelBranch(lambda t, s: 1.0, lambda t, s: 0.0),),
        curves=(),
        horizon=T,
    )
    return FirstKindProblem(kernel, g=lambda t: t, g_dt=lambda t: 1.0,
                            exact=lambda t: 1.0, name="constant")


BUILTIN = {"example1": example1, "example2": example2, "constant": constant_kernel}
