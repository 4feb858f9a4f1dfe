"""Gauss-Legendre rules and compound quadrature split at kernel breakpoints."""
import math
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import EvaluationError, ParameterError

MAX_DEGREE = 64
_MERGE_RTOL = 1e-14


@dataclass(frozen=True)
class GaussRule:
    degree: int
    nodes: tuple
    weights: tuple


def _legendre_and_derivative(m, x):
    p0, p1 = 1.0, x
    for k in range(2, m + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    # P_m'(x) from the standard identity, valid for |x| < 1
    dp = m * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


@lru_cache(maxsize=None)
def legendre_rule(m):
    """The m-point Gauss-Legendre rule on [-1, 1].

    Roots of P_m are found by Newton's method from Chebyshev points;
    the cache makes repeated calls cheap and is safe to share between threads.
    """
    if not isinstance(m, int) or not 1 <= m <= MAX_DEGREE:
        raise ParameterError(f"rule degree must be an integer in [1, {MAX_DEGREE}], got {m!r}")
    if m == 1:
        return GaussRule(1, (0.0,), (2.0,))
    half = (m + 1) // 2
    pos_nodes, pos_weights = [], []
    for i in range(half):
        x = math.cos(math.pi * (2 * i + 1) / (2 * m))
        for _ in range(100):
            p, dp = _legendre_and_derivative(m, x)
            dx = p / dp
            x -= dx
            if abs(dx) <= 1e-16:
                break
        # one more step at the converged point so the weight uses a fresh P_m'
        p, dp = _legendre_and_derivative(m, x)
        x -= p / dp
        p, dp = _legendre_and_derivative(m, x)
        pos_nodes.append(x)
        pos_weights.append(2.0 / ((1.0 - x * x) * dp * dp))
    if m % 2 == 1:
        pos_nodes[-1] = 0.0
    nodes = [0.0 - x for x in pos_nodes] + [x for x in reversed(pos_nodes[:m // 2])]
    weights = list(pos_weights) + list(reversed(pos_weights[:m // 2]))
    return GaussRule(m, tuple(nodes), tuple(weights))


@dataclass(frozen=True)
class BreakpointedInterval:
    """[a, b] with sorted breakpoints strictly inside it."""

    a: object
    b: object
    interior_breakpoints: tuple = field(default=())

    def __post_init__(self):
        if not float(self.a) < float(self.b):
            raise ParameterError(f"empty interval [{float(self.a)}, {float(self.b)}]")
        lo, hi = float(self.a), float(self.b)
        tol = _MERGE_RTOL * (hi - lo)
        kept = []
        last = lo
        for c in sorted(self.interior_breakpoints, key=float):
            fc = float(c)
            if fc - last <= tol or hi - fc <= tol:
                continue
            kept.append(c)
            last = fc
        object.__setattr__(self, "interior_breakpoints", tuple(kept))

    def pieces(self):
        ends = (self.a,) + self.interior_breakpoints + (self.b,)
        return list(zip(ends[:-1], ends[1:]))


def nodes_and_weights(interval, m, refine=1):
    """Abscissae and scaled weights of the compound m-point rule."""
    rule = legendre_rule(m)
    out = []
    for lo, hi in interval.pieces():
        step = (hi - lo) * (1.0 / refine)
        for q in range(refine):
            a = lo + step * q if q else lo
            b = hi if q == refine - 1 else lo + step * (q + 1)
            mid = (a + b) * 0.5
            half = (b - a) * 0.5
            for y, w in zip(rule.nodes, rule.weights):
                out.append((mid + half * y, half * w))
    return out


def _check_finite(value, s):
    fv = value if isinstance(value, float) else float(value)
    if not math.isfinite(fv):
        raise EvaluationError(f"integrand is not finite at s={float(s)!r}", float(s))


def integrate(fn, interval, m, refine=1):
    """Apply the m-point Gauss rule on every piece between breakpoints."""
    total = None
    for s, w in nodes_and_weights(interval, m, refine):
        v = fn(s)
        _check_finite(v, s)
        total = w * v if total is None else total + w * v
    return total


def breakpoints_for_kernel(kernel, t, a, b):
    """Sub-interval of [a, b] split where the kernel's curves cross it at time t."""
    fa, fb = float(a), float(b)
    inside = []
    for curve in kernel.curves:
        c = curve.value(t)
        if fa < float(c) < fb:
            inside.append(c)
    return BreakpointedInterval(a, b, tuple(inside))
