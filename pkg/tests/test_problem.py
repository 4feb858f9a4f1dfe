import math

import numpy as np
import pytest

from volterra_colloc.errors import ConfigError, DegenerateDiagonalError, DomainError, ModelError
from volterra_colloc.problem import (BoundaryCurve, FirstKindProblem, KernelBranch,
                                     PiecewiseKernel, branch_index, kernel_eval,
                                     manufactured_rhs, reduce)
from volterra_colloc.problems import constant_kernel
from volterra_colloc.quadrature import breakpoints_for_kernel, integrate


def test_branch_lookup(ex1):
    k = ex1.kernel
    assert branch_index(k, 0.6, 0.2) == 1
    assert branch_index(k, 0.6, 0.35) == 2
    assert branch_index(k, 0.5, 0.5) == 3
    assert branch_index(k, 0.6, 0.3) == 1  # on a curve: lower branch
    with pytest.raises(DomainError):
        branch_index(k, 0.5, 0.6)
    with pytest.raises(DomainError):
        branch_index(k, 0.5, -0.1)


def test_kernel_values(ex1):
    assert kernel_eval(ex1.kernel, 0.6, 0.2) == pytest.approx(0.8, abs=1e-15)
    assert kernel_eval(ex1.kernel, 0.6, 0.35) == pytest.approx(0.21, abs=1e-15)
    assert kernel_eval(ex1.kernel, 0.6, 0.5) == pytest.approx(1.6487212707, abs=1e-10)


def test_partition_and_smoothness(ex1, ex2):
    rng = np.random.default_rng(7)
    for pb in (ex1, ex2):
        k = pb.kernel
        T = k.horizon
        for _ in range(10 ** 4 // 2):
            t = rng.uniform(0, T)
            s = rng.uniform(0, t)
            i = branch_index(k, t, s)
            assert 1 <= i <= k.n
            claims = [c for c in range(1, k.n + 1)
                      if (0 if c == 1 else float(k.curves[c - 2].value(t))) <= s
                      and s <= (t if c == k.n else float(k.curves[c - 1].value(t)))]
            assert i in claims
            h = 1e-10
            if s - h > 0 and branch_index(k, t, s - h) == i:
                assert abs(kernel_eval(k, t, s) - kernel_eval(k, t, s - h)) < 1e-8


def test_model_validation():
    one = KernelBranch(lambda t, s: 1.0, lambda t, s: 0.0)
    with pytest.raises(ModelError):
        PiecewiseKernel((one, one), (), 1.0)
    with pytest.raises(ModelError):
        PiecewiseKernel((one,), (), 0.0)
    bad = PiecewiseKernel((one, one), (BoundaryCurve(lambda t: 1.2 * t, lambda t: 1.2),), 1.0)
    with pytest.raises(ModelError):
        bad.check_curves()
    with pytest.raises(ConfigError):
        FirstKindProblem(PiecewiseKernel((one,), (), 1.0))
    with pytest.raises(ModelError):
        FirstKindProblem(PiecewiseKernel((one,), (), 1.0), g=lambda t: 1.0, g_dt=lambda t: 0.0)


def test_constant_reduction():
    red = reduce(constant_kernel())
    assert red.delay_coeffs == () and red.delays == ()
    for t in (0.0, 0.3, 1.0):
        assert red.f(t) == 1.0
        assert red.h(t, t / 2) == 0.0


def test_example1_coefficients(red1):
    for t in (0.1, 0.5, 0.9):
        e = math.exp(t)
        assert red1.delay_coeffs[0](t) == pytest.approx(((t + t / 2) - t * t / 2) * 0.5 / e, abs=1e-15)
        assert red1.delay_coeffs[1](t) == pytest.approx(
            (t * 2 * t / 3 - math.exp(2 * t / 3)) * (2 / 3) / e, abs=1e-15)
        assert red1.h(t, 0.4 * t) == pytest.approx(-1 / e)
        assert red1.h(t, 0.6 * t) == pytest.approx(-0.6 * t / e)
        assert red1.h(t, 0.9 * t) == 0.0
        assert red1.h_at(t)(0.6 * t) == red1.h(t, 0.6 * t)


def _lhs(pb, t):
    k = pb.kernel
    iv = breakpoints_for_kernel(k, t, 0.0, t)
    return integrate(lambda s: kernel_eval(k, t, s) * pb.exact(s), iv, 20, refine=4)


@pytest.mark.parametrize("which", ["ex1", "ex2"])
def test_reduction_against_central_differences(which, request):
    pb = request.getfixturevalue(which)
    red = reduce(pb)
    k = pb.kernel
    rng = np.random.default_rng(3)
    d = 1e-5
    for t in rng.uniform(0.05, k.horizon - 0.05, 20):
        deriv = (_lhs(pb, t + d) - _lhs(pb, t - d)) / (2 * d)
        kn = k.branches[-1].eval(t, t)
        # K_n(t,t) [x + sum b x(alpha) - int h x] = K_n f
        want = kn * red.f(t)
        assert abs(deriv - want) <= 1e-6


@pytest.mark.parametrize("which", ["ex1", "ex2"])
def test_manufactured_residual(which, request):
    pb = request.getfixturevalue(which)
    red = reduce(pb)
    rng = np.random.default_rng(11)
    for t in rng.uniform(0, pb.horizon, 50):
        total = pb.exact(t) - red.f(t)
        for b, c in zip(red.delay_coeffs, red.delays):
            total += b(t) * pb.exact(c.value(t))
        iv = breakpoints_for_kernel(red, t, 0.0, t)
        total -= integrate(lambda s: red.h(t, s) * pb.exact(s), iv, 30, refine=3)
        assert abs(total) <= 1e-8


def test_manufactured_rhs_values(ex1, red1):
    assert manufactured_rhs(ex1, red1, 0.0) == 0.0
    # pinned against a 64-piece composite Gauss oracle
    iv = breakpoints_for_kernel(red1, 0.5, 0.0, 0.5)
    oracle = 0.5 * math.sin(0.5)
    for b, c in zip(red1.delay_coeffs, red1.delays):
        oracle += b(0.5) * ex1.exact(c.value(0.5))
    oracle -= integrate(lambda s: red1.h(0.5, s) * ex1.exact(s), iv, 20, refine=64)
    assert manufactured_rhs(ex1, red1, 0.5) == pytest.approx(oracle, abs=1e-14)
    assert oracle == pytest.approx(0.2016386577362544, abs=1e-13)


def test_degenerate_diagonal():
    k = PiecewiseKernel((KernelBranch(lambda t, s: t, lambda t, s: 1.0),), (), 1.0)
    with pytest.raises(DegenerateDiagonalError):
        reduce(FirstKindProblem(k, exact=lambda t: 1.0))


def test_rhs_modes(ex1):
    with pytest.raises(ConfigError):
        reduce(ex1, rhs="g_dt")
    with pytest.raises(ConfigError):
        reduce(ex1, rhs="nope")
    red = reduce(constant_kernel(), rhs="manufactured")
    assert red.f(0.7) == pytest.approx(1.0, abs=1e-15)
