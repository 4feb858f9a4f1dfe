"""Continuous local splines on a uniform mesh.

Each segment carries a degree r-1 Lagrange interpolant on r nodes: both
segment endpoints plus the r-2 Gauss-Legendre points mapped into it.
"""
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError, ParameterError
from .quadrature import legendre_rule

MAX_R = 12
_EDGE_RTOL = 1e-12


@dataclass(frozen=True)
class SegmentNodes:
    k: int
    t_lo: float
    t_hi: float
    xi: tuple


@lru_cache(maxsize=None)
def reference_nodes(r):
    """Nodes on [0, 1] and the reciprocals of the Lagrange denominators."""
    y = legendre_rule(r - 2).nodes
    z = (0.0,) + tuple(0.5 + 0.5 * v for v in y) + (1.0,)
    inv = []
    for j in range(r):
        d = 1.0
        for m in range(r):
            if m != j:
                d *= z[j] - z[m]
        inv.append(1.0 / d)
    return z, tuple(inv)


def make_nodes(T, N, r, max_r=MAX_R):
    if N < 1:
        raise ParameterError("need at least one segment")
    if r < 3:
        raise ParameterError("r must be at least 3 (Legendre degree r-2 >= 1)")
    if r > max_r:
        raise ParameterError(f"r={r} exceeds the cap {max_r}")
    y = legendre_rule(r - 2).nodes
    out = []
    for k in range(N):
        lo, hi = k * T / N, (k + 1) * T / N
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        xi = (lo,) + tuple(mid + half * v for v in y) + (hi,)
        out.append(SegmentNodes(k, lo, hi, xi))
    return out


def _check_inside(nodes, t):
    ft = float(t)
    # lifted abscissae may sit a few working-precision ulps outside the float64 edges
    u = getattr(getattr(t, "ctx", None), "unit_roundoff", 2.0 ** -53)
    slack = (_EDGE_RTOL * (nodes.t_hi - nodes.t_lo)
             + 8.0 * u * max(abs(nodes.t_lo), abs(nodes.t_hi)))
    if ft < nodes.t_lo - slack or ft > nodes.t_hi + slack:
        raise DomainError(
            f"t={ft} outside segment [{nodes.t_lo}, {nodes.t_hi}]")


def basis_values(nodes, t):
    """All r Lagrange basis polynomials of the segment evaluated at t."""
    _check_inside(nodes, t)
    r = len(nodes.xi)
    z, inv = reference_nodes(r)
    u = (t - nodes.t_lo) * (1.0 / (nodes.t_hi - nodes.t_lo))
    d = [u - zm for zm in z]
    pre = [None] * r
    acc = None
    for j in range(r):
        pre[j] = acc
        acc = d[j] if acc is None else acc * d[j]
    out = [None] * r
    acc = None
    for j in range(r - 1, -1, -1):
        if pre[j] is None:
            prod = acc
        elif acc is None:
            prod = pre[j]
        else:
            prod = pre[j] * acc
        out[j] = prod * inv[j]
        acc = d[j] if acc is None else acc * d[j]
    return out


def lagrange_basis(nodes, j, t):
    """L_j(t) = prod_{m != j} (t - xi_m) / (xi_j - xi_m) on one segment."""
    _check_inside(nodes, t)
    xi = nodes.xi
    value = 1.0
    for m, x in enumerate(xi):
        if m != j:
            value = value * ((t - x) * (1.0 / (xi[j] - x)))
    return value


class LocalSpline:
    """Piecewise polynomial x_N(t) with coefficients at the segment nodes.

    Only the owning solver writes ``coeffs``; afterwards the spline is read-only.
    """

    def __init__(self, T, N, r, segments=None, max_r=MAX_R):
        self.T = T
        self.N = N
        self.r = r
        self.segments = segments if segments is not None else make_nodes(T, N, r, max_r)
        self.coeffs = [[None] * r for _ in range(N)]

    def segment_of(self, t):
        ft = float(t)
        if ft < 0.0 or ft > self.T:
            raise DomainError(f"t={ft} outside [0, {self.T}]")
        k = min(int(ft * self.N / self.T), self.N - 1)
        while k > 0 and ft < self.segments[k].t_lo:
            k -= 1
        while k < self.N - 1 and ft >= self.segments[k].t_hi:
            k += 1
        return k

    def eval_segment(self, k, t):
        c = self.coeffs[k]
        total = None
        for cj, lj in zip(c, basis_values(self.segments[k], t)):
            term = cj * lj
            total = term if total is None else total + term
        return total

    def eval(self, t):
        return self.eval_segment(self.segment_of(t), t)

    __call__ = eval

    def dump(self):
        """Plain-text table with one row per coefficient."""
        lines = ["k\tj\txi\tvalue"]
        for seg, c in zip(self.segments, self.coeffs):
            for j, (x, v) in enumerate(zip(seg.xi, c)):
                lines.append(f"{seg.k}\t{j}\t{x:.17g}\t{float(v):.17g}")
        return "\n".join(lines) + "\n"


def eval(spline, t):
    return spline.eval(t)


def interpolate(fn, T, N, r, max_r=MAX_R):
    """Spline taking the values of ``fn`` at every node."""
    sp = LocalSpline(T, N, r, max_r=max_r)
    for k, seg in enumerate(sp.segments):
        sp.coeffs[k] = [fn(x) for x in seg.xi]
        if k:
            sp.coeffs[k][0] = sp.coeffs[k - 1][-1]
    return sp
