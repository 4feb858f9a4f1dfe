import math

import numpy as np
import pytest

from volterra_colloc.collocation import (SegmentSystem, assemble_segment, collocation_residual,
                                         gauss_jordan_solve, solve, sup_error)
from volterra_colloc.errors import EvaluationError, SingularSystemError
from volterra_colloc.problem import (FirstKindProblem, KernelBranch, PiecewiseKernel,
                                     BoundaryCurve, reduce)
from volterra_colloc.problems import constant_kernel
from volterra_colloc.spline import LocalSpline, interpolate


def test_gauss_jordan_examples():
    assert gauss_jordan_solve(SegmentSystem([[1.0, 0.0], [0.0, 1.0]], [4.0, -2.0], [])) == [4.0, -2.0]
    x = gauss_jordan_solve(SegmentSystem([[2.0, 1.0], [1.0, 3.0]], [5.0, 10.0], []))
    assert x == pytest.approx([1.0, 3.0], abs=1e-15)
    with pytest.raises(SingularSystemError):
        gauss_jordan_solve(SegmentSystem([[1.0, 2.0], [2.0, 4.0]], [1.0, 2.0], []))
    with pytest.raises(SingularSystemError):
        gauss_jordan_solve(SegmentSystem([[1.0, 2.0]], [1.0], []))


def test_gauss_jordan_matches_numpy():
    rng = np.random.default_rng(5)
    for n in range(1, 12):
        A = rng.normal(size=(n, n)) + n * np.eye(n)
        b = rng.normal(size=n)
        x = gauss_jordan_solve(SegmentSystem(A.tolist(), b.tolist(), []))
        assert np.allclose(x, np.linalg.solve(A, b), atol=1e-12)


def test_first_segment_identity_system():
    red = reduce(constant_kernel())
    sp = LocalSpline(1.0, 1, 3)
    sys_ = assemble_segment(red, sp, 0, 2)
    assert np.allclose(sys_.matrix, np.eye(3), atol=1e-15)
    assert sys_.rhs == [1.0, 1.0, 1.0]
    assert gauss_jordan_solve(sys_) == pytest.approx([1, 1, 1], abs=1e-15)


@pytest.mark.parametrize("N", range(1, 6))
@pytest.mark.parametrize("r", range(3, 7))
def test_trivial_problem(N, r):
    sol = solve(reduce(constant_kernel()), N, r)
    assert sup_error(sol, lambda t: 1.0, samples=200) <= 1e-12


def test_polynomial_solution_exact_for_polynomial_kernel():
    # x = 1 + 2t - t^2 with polynomial branches: every quadrature is exact
    kernel = PiecewiseKernel(
        (KernelBranch(lambda t, s: t - s, lambda t, s: 1.0),
         KernelBranch(lambda t, s: 2.0 + s, lambda t, s: 0.0)),
        (BoundaryCurve(lambda t: t / 2, lambda t: 0.5),), 1.0)
    exact = lambda t: 1 + 2 * t - t * t
    pb = FirstKindProblem(kernel, exact=exact)
    sol = solve(reduce(pb, quad_points=10), 1, 4, m_quad=6)
    assert sup_error(sol, exact) <= 1e-10


def test_causality(red1):
    a = solve(red1, 6, 5)
    sp = LocalSpline(1.0, 6, 5)
    for k in range(6):
        if k:
            sp.coeffs[k][0] = sp.coeffs[k - 1][-1]
        x = gauss_jordan_solve(assemble_segment(red1, sp, k, 3))
        for j, v in zip(range(1 if k else 0, 5), x):
            sp.coeffs[k][j] = v
        # earlier segments are untouched and equal the full solve
        for l in range(k + 1):
            assert sp.coeffs[l] == a.spline.coeffs[l]


def test_self_residual(red1, red2):
    for red, N, r in ((red1, 4, 5), (red2, 3, 6)):
        sol = solve(red, N, r)
        for k in range(N):
            for j in range(r):
                assert abs(collocation_residual(red, sol.spline, k, j)) <= 1e-9


def test_exact_solution_row_consistency(ex1, red1):
    # prior segments hold the exact solution; the exact values nearly satisfy the rows
    N, r = 4, 6
    sp = interpolate(ex1.exact, 1.0, N, r)
    sys_ = assemble_segment(red1, sp, 2, 8, refine=2)
    x = [ex1.exact(t) for t in sp.segments[2].xi[1:]]
    res = max(abs(math.fsum(a * v for a, v in zip(row, x)) - b)
              for row, b in zip(sys_.matrix, sys_.rhs))
    assert res <= 1e-6  # interpolation error of the history, not quadrature error


def test_sup_error_of_own_interpolant(red1):
    sol = solve(red1, 3, 4)
    assert sup_error(sol, sol.spline.eval) <= 1e-13


def test_no_continuity_mode(red1, ex1):
    sol = solve(red1, 5, 5, continuity=False)
    assert sup_error(sol, ex1.exact) <= 1e-6


def test_segment_annotation_on_failure():
    # h turns NaN for t > 0.5, so the third of four segments fails
    kernel = PiecewiseKernel((KernelBranch(lambda t, s: 1.0,
                                           lambda t, s: math.nan if t > 0.5 else 0.0),),
                             (), 1.0)
    red = reduce(FirstKindProblem(kernel, g_dt=lambda t: 1.0))
    with pytest.raises(EvaluationError, match="segment 2") as info:
        solve(red, 4, 4)
    assert info.value.segment == 2
