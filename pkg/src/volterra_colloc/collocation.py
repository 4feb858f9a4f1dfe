"""Step-by-step spline collocation for the reduced second-kind equation.

Segments are solved in order.  On segment k the unknowns are the spline
values at its nodes; the left value is inherited from segment k-1 so the
spline stays continuous.  Integrals over earlier segments and delay values
falling into them are known and move to the right-hand side.

All arithmetic goes through the scalar type produced by ``number`` (``float``
by default), so the same code runs under stochastic arithmetic.
"""
import math
from dataclasses import dataclass

from .errors import ModelError, SingularSystemError, VolterraError
from .quadrature import breakpoints_for_kernel, integrate, nodes_and_weights
from .spline import MAX_R, LocalSpline, basis_values

PIVOT_RTOL = 1e-13
RESIDUAL_RTOL = 1e-10


@dataclass
class SegmentSystem:
    matrix: list
    rhs: list
    unknown_map: list


@dataclass
class CollocationSolution:
    spline: LocalSpline
    residual_norm: float
    N: int
    r: int


def default_quad_points(r):
    return max(2, r - 2)


def _unit_roundoff(number):
    return getattr(number, "unit_roundoff", 2.0 ** -53)


def assemble_segment(reduced, spline, k, m_quad, number=float, continuity=True,
                     refine=1):
    """Collocation equations for the unknown coefficients of segment k.

    Segments 0..k-1 of ``spline`` must already hold their coefficients, and
    with ``continuity`` the left coefficient of segment k must be set.
    """
    seg = spline.segments[k]
    r = spline.r
    first = 1 if (k > 0 and continuity) else 0
    cols = list(range(first, r))
    t_lo = number(seg.t_lo)
    history = [(l, number(s.t_lo), number(s.t_hi)) for l, s in enumerate(spline.segments[:k])]

    matrix, rhs = [], []
    for j in cols:
        xi = number(seg.xi[j])
        fxi = float(xi)
        row = basis_values(seg, xi)
        b_j = reduced.f(xi)

        for coeff, curve in zip(reduced.delay_coeffs, reduced.delays):
            a = curve.value(xi)
            if float(a) > fxi:
                raise ModelError(f"delay curve exceeds t at t={fxi}")
            bv = coeff(xi)
            if float(a) >= seg.t_lo:
                la = basis_values(seg, a)
                row = [rc + bv * lc for rc, lc in zip(row, la)]
            else:
                b_j = b_j - bv * spline.eval(a)

        hs = reduced.h_at(xi)
        if fxi > seg.t_lo:
            interval = breakpoints_for_kernel(reduced, xi, t_lo, xi)
            for s, w in nodes_and_weights(interval, m_quad, refine):
                hw = hs(s) * w
                row = [rc - hw * lc for rc, lc in zip(row, basis_values(seg, s))]

        for l, lo, hi in history:
            interval = breakpoints_for_kernel(reduced, xi, lo, hi)
            b_j = b_j + integrate(lambda s, l=l: hs(s) * spline.eval_segment(l, s),
                                  interval, m_quad, refine)

        if first:
            b_j = b_j - row[0] * spline.coeffs[k][0]
        matrix.append(row[first:])
        rhs.append(b_j)
    return SegmentSystem(matrix, rhs, [(k, j) for j in cols])


def gauss_jordan_solve(system, residual_rtol=RESIDUAL_RTOL):
    """Gauss-Jordan elimination with partial pivoting."""
    A = [list(row) for row in system.matrix]
    b = list(system.rhs)
    n = len(A)
    if any(len(row) != n for row in A) or len(b) != n:
        raise SingularSystemError("system is not square")
    scale = max((abs(float(v)) for row in A for v in row), default=0.0)
    if not math.isfinite(scale):
        raise SingularSystemError("matrix has non-finite entries")
    for col in range(n):
        piv = max(range(col, n), key=lambda i: abs(float(A[i][col])))
        if not abs(float(A[piv][col])) > PIVOT_RTOL * scale:
            raise SingularSystemError(f"pivot below tolerance in column {col}")
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            b[col], b[piv] = b[piv], b[col]
        p = A[col][col]
        pivot_row = A[col]
        for c in range(col + 1, n):
            pivot_row[c] = pivot_row[c] / p
        b[col] = b[col] / p
        pivot_row[col] = 1.0
        for i in range(n):
            if i == col:
                continue
            factor = A[i][col]
            if isinstance(factor, float) and factor == 0.0:
                continue
            row = A[i]
            for c in range(col + 1, n):
                row[c] = row[c] - factor * pivot_row[c]
            row[col] = 0.0
            b[i] = b[i] - factor * b[col]
    x = b
    res = _residual(system, x)
    bound = residual_rtol * (1.0 + max((abs(float(v)) for v in system.rhs), default=0.0))
    if not res <= bound:
        raise SingularSystemError(
            f"back-substituted residual {res:.3g} exceeds {bound:.3g}")
    return x


def _residual(system, x):
    xf = [float(v) for v in x]
    worst = 0.0
    for row, rhs in zip(system.matrix, system.rhs):
        r = math.fsum(float(a) * v for a, v in zip(row, xf)) - float(rhs)
        worst = max(worst, abs(r))
    return worst


def solve(reduced, N, r, m_quad=None, number=float, continuity=True, refine=1,
          max_r=MAX_R):
    """Solve segment by segment and return the spline x_N."""
    if m_quad is None:
        m_quad = default_quad_points(r)
    spline = LocalSpline(reduced.horizon, N, r, max_r=max_r)
    rtol = max(RESIDUAL_RTOL, 1e3 * r * _unit_roundoff(number))
    worst = 0.0
    for k in range(N):
        if k and continuity:
            spline.coeffs[k][0] = spline.coeffs[k - 1][r - 1]
        try:
            system = assemble_segment(reduced, spline, k, m_quad, number,
                                      continuity, refine)
            x = gauss_jordan_solve(system, rtol)
        except VolterraError as exc:
            exc.args = (f"segment {k}: {exc.args[0] if exc.args else exc}",) + exc.args[1:]
            exc.segment = k
            raise
        for (_, j), v in zip(system.unknown_map, x):
            spline.coeffs[k][j] = v
        worst = max(worst, _residual(system, x))
    return CollocationSolution(spline, worst, N, r)


def collocation_residual(reduced, spline, k, j, m_quad=None, number=float, refine=1):
    """Residual of the reduced equation for the finished spline at node (k, j)."""
    if m_quad is None:
        m_quad = default_quad_points(spline.r)
    seg = spline.segments[k]
    xi = number(seg.xi[j])
    total = spline.eval_segment(k, xi) - reduced.f(xi)
    for coeff, curve in zip(reduced.delay_coeffs, reduced.delays):
        total = total + coeff(xi) * spline.eval(curve.value(xi))
    hs = reduced.h_at(xi)
    for l in range(k + 1):
        lo = number(spline.segments[l].t_lo)
        hi = xi if l == k else number(spline.segments[l].t_hi)
        if float(hi) <= float(lo):
            continue
        interval = breakpoints_for_kernel(reduced, xi, lo, hi)
        total = total - integrate(lambda s, l=l: hs(s) * spline.eval_segment(l, s),
                                  interval, m_quad, refine)
    return total


def sup_error(solution, exact, samples=1000):
    """max |x_N - x*| over equispaced points plus every collocation node."""
    spline = solution.spline if isinstance(solution, CollocationSolution) else solution
    T = spline.T
    pts = [T * i / (samples - 1) for i in range(samples)] if samples > 1 else [0.0]
    worst = 0.0
    for t in pts:
        worst = max(worst, abs(float(spline.eval(t)) - float(exact(t))))
    for k, seg in enumerate(spline.segments):
        for x in seg.xi:
            worst = max(worst, abs(float(spline.eval_segment(k, x)) - float(exact(x))))
    return worst
