"""Experiments: adaptive choice of N, convergence tables, noise stability.

The adaptive loop refines N = 1, 2, ... and compares successive values at a
probe point.  In floating-point mode it stops once the difference drops
below a user tolerance; in stochastic mode it stops when the difference is
an informatical zero, i.e. no longer distinguishable from rounding noise.
"""
import csv
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .collocation import solve, sup_error
from .errors import ConfigError, ParameterError
from .problem import reduce
from .stochastic import DEFAULT_DELTA, DEFAULT_SAMPLES, RoundingContext, ncsd_estimate, sa_sub

DEFAULT_T_EVAL = 0.05


@dataclass(frozen=True)
class StopRule:
    """Stopping criterion for :func:`adaptive_solve`.

    ``mode`` is ``"fpa"`` (needs ``epsilon``) or ``"sa"``.  The stochastic
    options default to three samples in single precision at 95% confidence.
    """

    mode: str = "sa"
    epsilon: Optional[float] = None
    delta: float = DEFAULT_DELTA
    t_eval: float = DEFAULT_T_EVAL
    max_N: int = 10
    seed: int = 0
    samples: int = DEFAULT_SAMPLES
    precision: str = "single"

    def __post_init__(self):
        if self.mode not in ("fpa", "sa"):
            raise ParameterError(f"unknown stop mode {self.mode!r}")
        if self.mode == "fpa" and not (self.epsilon is not None and self.epsilon > 0):
            raise ParameterError("FPA stopping needs epsilon > 0")
        if not 0.0 < self.delta < 1.0:
            raise ParameterError("confidence parameter delta must lie in (0, 1)")
        if not self.t_eval > 0:
            raise ParameterError("t_eval must be positive")
        if self.max_N < 2:
            raise ParameterError("max_N must be at least 2")


@dataclass
class AdaptiveRow:
    N: int
    value: float
    diff: Optional[float]
    error: Optional[float]
    informatical_zero: bool
    ncsd: Optional[float] = None
    samples: Optional[tuple] = None


@dataclass
class ConvergenceReport:
    rows: List[AdaptiveRow]
    N_opt: Optional[int]
    error_opt: Optional[float]
    mode: str
    seed: Optional[int] = None

    @property
    def converged(self):
        return self.N_opt is not None


@dataclass
class ConvergenceTable:
    r: int
    Ns: List[int]
    errors: List[float]
    order: float
    local_orders: List[Optional[float]] = field(default_factory=list)


@dataclass
class StabilityReport:
    deltas: List[float]
    errors: List[float]
    seed: int
    trials: int = 1
    all_errors: List[List[float]] = field(default_factory=list)


def _as_data(f, ctx):
    # the free term is input data: evaluate in float64, store as an exact constant
    return lambda t: ctx.exact(f(float(t)))


def sa_solve(reduced, N, r, ctx, m_quad=None, continuity=True):
    """Run the collocation solver under stochastic arithmetic."""
    return solve(reduced.with_rhs(_as_data(reduced.f, ctx)), N, r, m_quad,
                 number=ctx, continuity=continuity)


def adaptive_solve(problem, r, rule, m_quad=None, continuity=True, reduced=None):
    """Increase N until successive values at ``rule.t_eval`` agree."""
    if rule.t_eval > problem.horizon:
        raise ParameterError("t_eval lies beyond the horizon")
    if reduced is None:
        reduced = reduce(problem)
    exact = problem.exact(rule.t_eval) if problem.exact is not None else None
    rows = []
    prev = None
    for N in range(1, rule.max_N + 1):
        if rule.mode == "sa":
            ctx = RoundingContext(seed=[rule.seed, N], p=rule.samples,
                                  precision=rule.precision)
            sol = sa_solve(reduced, N, r, ctx, m_quad, continuity)
            value = sol.spline.eval(ctx.exact(rule.t_eval))
        else:
            value = solve(reduced, N, r, m_quad, continuity=continuity).spline.eval(rule.t_eval)
        fv = float(value)
        error = abs(fv - float(exact)) if exact is not None else None
        row = AdaptiveRow(N, fv, None, error, False)
        if rule.mode == "sa":
            row.samples = value.samples
        if prev is not None:
            if rule.mode == "sa":
                d = sa_sub(value, prev)
                rep = ncsd_estimate(d, rule.delta)
                row.diff, row.ncsd, row.informatical_zero = (
                    abs(d.mean), rep.value, rep.informatical_zero)
            else:
                row.diff = abs(fv - float(prev))
                row.informatical_zero = row.diff <= rule.epsilon
        rows.append(row)
        if row.informatical_zero:
            if rule.mode == "sa":
                earlier = [q.diff for q in rows[:-1] if q.diff is not None]
                error_opt = earlier[-1] if earlier else None
            else:
                error_opt = row.diff
            return ConvergenceReport(rows, N, error_opt, rule.mode,
                                     rule.seed if rule.mode == "sa" else None)
        prev = value
    return ConvergenceReport(rows, None, None, rule.mode,
                             rule.seed if rule.mode == "sa" else None)


def fitted_order(Ns, errors):
    """Negative slope of the least-squares line through (log N, log e)."""
    pts = [(math.log(n), math.log(e)) for n, e in zip(Ns, errors) if e > 0]
    if len(pts) < 2:
        return float("nan")
    x, y = np.array(pts).T
    return float(-np.polyfit(x, y, 1)[0])


def convergence_study(problem, r, Ns, samples=1000, m_quad=None, continuity=True,
                      reduced=None):
    if problem.exact is None:
        raise ConfigError("convergence study needs an exact solution")
    if reduced is None:
        reduced = reduce(problem)
    Ns = list(Ns)
    errors = [sup_error(solve(reduced, N, r, m_quad, continuity=continuity),
                        problem.exact, samples) for N in Ns]
    local = [None]
    for (n0, e0), (n1, e1) in zip(zip(Ns, errors), zip(Ns[1:], errors[1:])):
        ok = e0 > 0 and e1 > 0 and n1 != n0
        local.append(-math.log(e1 / e0) / math.log(n1 / n0) if ok else None)
    return ConvergenceTable(r, Ns, errors, fitted_order(Ns, errors), local)


def stability_study(problem, N, r, deltas, seed=0, trials=1, samples=1000,
                    m_quad=None, reduced=None):
    """Sup error when every evaluation of f carries uniform(-delta, delta) noise.

    With several trials the reported error per delta is the median.
    """
    if problem.exact is None:
        raise ConfigError("stability study needs an exact solution")
    deltas = [float(d) for d in deltas]
    if any(d < 0 for d in deltas) or any(b <= a for a, b in zip(deltas, deltas[1:])):
        raise ParameterError("noise levels must be non-negative and strictly ascending")
    if reduced is None:
        reduced = reduce(problem)
    f = reduced.f
    medians, per_delta = [], []
    for i, d in enumerate(deltas):
        errs = []
        for trial in range(trials):
            rng = np.random.default_rng([seed, i, trial])

            def noisy(t, rng=rng, d=d):
                return f(t) + float(rng.uniform(-d, d))
            sol = solve(reduced.with_rhs(noisy), N, r, m_quad)
            errs.append(sup_error(sol, problem.exact, samples))
        per_delta.append(errs)
        medians.append(float(np.median(errs)))
    return StabilityReport(deltas, medians, seed, trials, per_delta)


CONVERGENCE_HEADER = ["N", "error", "order"]
ADAPTIVE_HEADER = ["N", "value", "diff", "ncsd", "zero_flag"]
STABILITY_HEADER = ["delta", "error"]


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def write_convergence_csv(table, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CONVERGENCE_HEADER)
    for n, e, o in zip(table.Ns, table.errors, table.local_orders):
        w.writerow([_fmt(n), _fmt(e), _fmt(o)])


def write_adaptive_csv(report, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(ADAPTIVE_HEADER)
    for row in report.rows:
        w.writerow([_fmt(row.N), _fmt(row.value), _fmt(row.diff), _fmt(row.ncsd),
                    _fmt(row.informatical_zero)])


def write_stability_csv(report, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(STABILITY_HEADER)
    for d, e in zip(report.deltas, report.errors):
        w.writerow([_fmt(d), _fmt(e)])
