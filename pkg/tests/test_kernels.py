import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from catenoid import kernels
from catenoid.kernels import (Bracket, BracketError, IntegrationError,
                              KernelError, QuadratureError, SolverConfig)


# ---------------------------------------------------------------------------
# integrate_ivp
# ---------------------------------------------------------------------------

def test_integrate_exponential():
    end = kernels.integrate_ivp(lambda x, y: y, [1.0], (0.0, 1.0))
    assert abs(end[0] - math.e) < 1e-11


def test_integrate_cosine_system():
    end = kernels.integrate_ivp(lambda x, y: [y[1], -y[0]], [1.0, 0.0],
                                (0.0, math.pi))
    assert abs(end[0] + 1.0) < 1e-11
    assert abs(end[1]) < 1e-11


def test_integrate_profile_matches_cosh():
    # at n=2 the profile equation is solved by cosh
    def rhs(x, y):
        f, fx = y
        return (fx, (1.0 + fx * fx) / f)

    end = kernels.integrate_ivp(rhs, [1.0, 0.0], (0.0, 1.19968))
    assert abs(end[0] - math.cosh(1.19968)) < 1e-10
    assert abs(end[0] - 1.81017) < 1e-5


def test_integrate_backward_span():
    end = kernels.integrate_ivp(lambda x, y: y, [math.e], (1.0, 0.0))
    assert abs(end[0] - 1.0) < 1e-11


@pytest.mark.parametrize("rhs,y0,span", [
    (lambda x, y: y, [1.0], (0.0, 1.0)),
    (lambda x, y: [y[1], -y[0]], [0.0, 1.0], (0.0, 2.5)),
    (lambda x, y: [y[1], 0.5 * (1 + y[1] ** 2) / y[0]], [1.0, 0.0], (0.0, 0.9)),
])
def test_tolerance_halving_self_consistency(rhs, y0, span):
    # halving rel_tol moves the answer by less than the prior tolerance
    for rel in (1e-8, 1e-10, 1e-12):
        coarse = kernels.integrate_ivp(rhs, y0, span, SolverConfig(rel_tol=rel))
        fine = kernels.integrate_ivp(rhs, y0, span,
                                     SolverConfig(rel_tol=rel).halved())
        scale = np.maximum(1.0, np.abs(fine))
        assert np.all(np.abs(coarse - fine) <= rel * scale)


def test_integrate_step_budget_exhaustion():
    cfg = SolverConfig(max_steps=3)
    with pytest.raises(IntegrationError) as info:
        kernels.integrate_ivp(lambda x, y: [math.sin(40 * x) * y[0]], [1.0],
                              (0.0, 50.0), cfg)
    assert info.value.last_x < 50.0


def test_integrate_blowup_reports_last_x():
    # y' = y**2 from y(0)=1 blows up at x=1
    with pytest.raises(IntegrationError) as info:
        kernels.integrate_ivp(lambda x, y: [y[0] ** 2], [1.0], (0.0, 2.0))
    assert 0.9 < info.value.last_x < 1.1


def test_integrate_to_event():
    x, y = kernels.integrate_to_event(lambda x, y: [y[1], -y[0]], [1.0, 0.0],
                                      (0.0, 4.0), lambda x, y: y[0])
    assert abs(x - math.pi / 2) < 1e-10


def test_integrate_on_grid():
    grid = np.linspace(0.0, 1.0, 7)
    rows = kernels.integrate_on_grid(lambda x, y: y, [1.0], grid)
    assert np.allclose(rows[:, 0], np.exp(grid), rtol=1e-11)


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(rel_tol=0.0)
    with pytest.raises(ValueError):
        SolverConfig(max_steps=0)
    with pytest.raises(ValueError):
        Bracket(2.0, 1.0)


# ---------------------------------------------------------------------------
# find_root
# ---------------------------------------------------------------------------

def test_find_root_sqrt2():
    root = kernels.find_root(lambda x: x * x - 2.0, Bracket(1.0, 2.0))
    assert abs(root - math.sqrt(2.0)) < 1e-12


def test_find_root_identity():
    assert abs(kernels.find_root(lambda x: x, Bracket(-1.0, 1.0))) < 1e-13


def test_find_root_free_boundary_fixed_point():
    # x*sinh(x) - cosh(x) has its root where x = coth(x); bisection oracle
    f = lambda x: x * math.sinh(x) - math.cosh(x)
    lo, hi = 1.0, 2.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if f(lo) * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
    oracle = 0.5 * (lo + hi)
    root = kernels.find_root(f, Bracket(1.0, 2.0))
    assert abs(root - oracle) < 1e-12
    assert abs(root - 1.19968) < 1e-5


@pytest.mark.parametrize("f,lo,hi", [
    (lambda x: x ** 3 - 0.7, 0.0, 1.0),
    (lambda x: math.cos(x), 0.0, 3.0),
    (lambda x: math.expm1(x) - 0.3, -1.0, 1.0),
])
def test_find_root_result_is_bracketed(f, lo, hi):
    tol = 1e-11
    root = kernels.find_root(f, Bracket(lo, hi), tol=tol)
    assert f(max(lo, root - tol)) * f(min(hi, root + tol)) <= 0.0


def test_find_root_rejects_no_sign_change():
    with pytest.raises(BracketError):
        kernels.find_root(lambda x: x * x + 1.0, Bracket(-1.0, 1.0))


def test_expand_bracket():
    bracket = kernels.expand_bracket(lambda x: x - 5.0, 0.0, 1.0)
    assert bracket.lo == 0.0 and bracket.hi >= 5.0
    with pytest.raises(BracketError):
        kernels.expand_bracket(lambda x: 1.0 + x * x, 0.0, 1.0, max_doublings=8)


# ---------------------------------------------------------------------------
# quad_tanh_sinh
# ---------------------------------------------------------------------------

def test_quad_constant():
    assert abs(kernels.quad_tanh_sinh(lambda x: np.ones_like(x), 0.0, 1.0) - 1.0) < 1e-13


def test_quad_inverse_sqrt_endpoint():
    # the distance argument keeps the singular factor accurate where x has
    # rounded onto the endpoint
    def f(x, d):
        return np.where(d < 0.0, np.abs(d), 1.0 - x) ** -0.5

    val = kernels.quad_tanh_sinh(f, 0.0, 1.0, pass_distance=True)
    assert abs(val - 2.0) < 1e-13


def test_quad_beta_half_half():
    def f(x, d):
        left = np.where(d > 0.0, np.abs(d), x)
        right = np.where(d < 0.0, np.abs(d), 1.0 - x)
        return 1.0 / np.sqrt(left * right)

    val = kernels.quad_tanh_sinh(f, 0.0, 1.0, pass_distance=True)
    assert abs(val - math.pi) < 1e-12


def test_quad_plain_call_singular_integrand():
    # without the distance argument the rule still converges, just not to
    # full precision (nodes that round onto the endpoint are dropped)
    with np.errstate(divide="ignore"):
        val = kernels.quad_tanh_sinh(lambda x: (1.0 - x) ** -0.5, 0.0, 1.0,
                                     tol=1e-6)
    assert abs(val - 2.0) < 1e-4


def test_quad_orientation_and_degenerate():
    assert kernels.quad_tanh_sinh(lambda x: x, 1.0, 1.0) == 0.0
    forward = kernels.quad_tanh_sinh(lambda x: x ** 2, 0.0, 2.0)
    backward = kernels.quad_tanh_sinh(lambda x: x ** 2, 2.0, 0.0)
    assert abs(forward + backward) < 1e-14
    assert abs(forward - 8.0 / 3.0) < 1e-12


def test_quad_nonconvergence():
    with pytest.raises(QuadratureError):
        kernels.quad_tanh_sinh(lambda x: 1.0 / x, 0.0, 1.0, max_levels=8)


@given(st.floats(-3.0, 3.0), st.floats(-3.0, 3.0), st.floats(-3.0, 3.0))
@settings(max_examples=25, deadline=None)
def test_quad_additivity(p, q, r):
    a, b, c = sorted((p, q, r))
    tol = 1e-12
    f = lambda x: np.exp(-0.3 * x) * np.sin(x) + x ** 2
    whole = kernels.quad_tanh_sinh(f, a, c, tol=tol)
    split = (kernels.quad_tanh_sinh(f, a, b, tol=tol)
             + kernels.quad_tanh_sinh(f, b, c, tol=tol))
    assert abs(whole - split) <= 10 * tol * max(1.0, abs(whole))


# ---------------------------------------------------------------------------
# log-gamma / beta / binomials
# ---------------------------------------------------------------------------

def test_log_gamma_basics():
    assert kernels.log_gamma(1.0) == 0.0
    assert abs(kernels.log_gamma(0.5) - 0.5 * math.log(math.pi)) < 1e-14
    with pytest.raises(ValueError):
        kernels.log_gamma(0.0)
    with pytest.raises(ValueError):
        kernels.log_gamma(-2.5)


def test_beta_values():
    assert abs(kernels.beta(0.5, 0.5) - math.pi) < 1e-13
    assert abs(kernels.beta(1.0, 1.0) - 1.0) < 1e-14


def test_binomial_exact():
    assert kernels.binomial_exact(14, 3) == 364
    assert kernels.binomial_exact(5, -1) == 0
    assert kernels.binomial_exact(5, 6) == 0
    assert kernels.binomial_exact(-1, 1) == 0
    assert kernels.binomial_exact(0, 0) == 1


def test_log_binomial_matches_exact_everywhere():
    for n in range(61):
        for k in range(n + 1):
            exact = kernels.binomial_exact(n, k)
            approx = math.exp(kernels.log_binomial(n, k))
            assert abs(approx - exact) <= 1e-12 * exact


def test_log_binomial_large_arguments():
    exact = math.log(kernels.binomial_exact(1000, 100))
    assert abs(kernels.log_binomial(1000, 100) - exact) < 1e-10 * abs(exact)
    assert math.isfinite(kernels.log_binomial(100315, 315))
    assert kernels.log_binomial(10, 11) == -math.inf
    assert kernels.log_binomial(10, -1) == -math.inf
