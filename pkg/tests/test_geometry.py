import math

import numpy as np
import pytest

from catenoid import geometry, kernels
from catenoid.geometry import GeometryError
from catenoid.kernels import SolverConfig


def test_profile_initial_condition():
    for n in (2, 7, 40):
        pt = geometry.profile(n, 0.0)
        assert (pt.f, pt.f_x) == (1.0, 0.0)


def test_profile_is_cosh_at_n2():
    pt = geometry.profile(2, 1.0)
    assert abs(pt.f - math.cosh(1.0)) < 1e-11
    assert abs(pt.f_x - math.sinh(1.0)) < 1e-11


def test_profile_boundary_value_n2():
    assert abs(geometry.profile(2, 1.19968).f - 1.81017) < 1e-5


def test_profile_first_integral_drift():
    for n in (2, 3, 10, 50, 100):
        geom = geometry.geometry_for(n)
        xs = np.linspace(0.0, geom.W, 12)
        rows = geometry.profile_grid(geom.alpha, xs)
        residual = rows[:, 1] ** 2 - np.exp(geom.alpha * np.log(rows[:, 0])) + 1.0
        assert np.max(np.abs(residual)) <= 1e-9


def test_profile_outside_maximal_interval():
    # L(n=3) ~ 1.311, so x = 2 is unreachable
    with pytest.raises(GeometryError):
        geometry.profile(3, 2.0)


def test_profile_rejects_bad_input():
    with pytest.raises(GeometryError):
        geometry.profile(1, 0.5)
    with pytest.raises(GeometryError):
        geometry.profile(3, -0.1)


def test_inverse_profile_is_arccosh_at_n2():
    assert abs(geometry.inverse_profile(2, math.cosh(1.0)) - 1.0) < 1e-12
    assert geometry.inverse_profile(2, 1.0) == 0.0


def test_inverse_profile_published_row():
    assert abs(geometry.inverse_profile(3, 1.60312) - 0.67715) < 1e-5


def test_inverse_profile_round_trip():
    for n in (2, 5, 30):
        geom = geometry.geometry_for(n)
        for frac in (0.2, 0.5, 0.8, 1.0):
            x = frac * geom.W
            y = geometry.profile(n, x).f
            assert abs(geometry.inverse_profile(n, y) - x) <= 1e-9


def test_half_length_catenary_is_infinite():
    assert geometry.half_length(2.0) == math.inf


def test_half_length_against_quadrature_oracle():
    # independent route: t -> 1/u turns the tail integral into
    # int_0^1 (1 - u**4)**(-1/2) du
    def integrand(u, d):
        near_one = np.where(d < 0.0, np.abs(d), 1.0 - u)
        return 1.0 / np.sqrt(near_one * (1.0 + u) * (1.0 + u * u))

    oracle = kernels.quad_tanh_sinh(integrand, 0.0, 1.0, pass_distance=True)
    assert abs(geometry.half_length(4.0) - oracle) < 1e-12
    assert abs(geometry.half_length(4.0) - 1.31103) < 1e-5


def test_half_length_leading_order():
    # alpha * L / pi -> 1 from above as alpha grows
    ratios = [geometry.half_length(a) * a / math.pi for a in (1e3, 1e4, 1e5)]
    assert ratios[0] > ratios[1] > ratios[2] > 1.0
    assert ratios[2] - 1.0 < 1e-4


def test_half_length_domain():
    with pytest.raises(GeometryError):
        geometry.half_length(1.5)


def test_solve_geometry_published_rows(reference_geometry):
    for n in (2, 3, 4, 25, 50, 100):
        w_ref, h_ref = reference_geometry[n]
        geom = geometry.solve_geometry(n)
        assert abs(geom.W - w_ref) < 1e-5
        assert abs(geom.H - h_ref) < 1e-5


def test_solution_invariants():
    for n in (2, 7, 33, 100):
        geom = geometry.solve_geometry(n)
        assert 0.0 < geom.W < geom.L
        assert geom.H > 1.0
        assert abs(geom.R ** 2 - (geom.W ** 2 + geom.H ** 2)) < 1e-14
        pt = geometry.profile(n, geom.W)
        assert abs(geom.W * pt.f_x / geom.H - 1.0) <= 1e-9


def test_routes_agree():
    for n in (2, 7, 33, 100):
        cfg = kernels.DEFAULT_CONFIG
        w_quad, h_quad = geometry._solve_h_route(2.0 * (n - 1), 1e-13, 1e-13)
        w_ode, h_ode, _ = geometry._solve_w_route(2.0 * (n - 1), cfg)
        assert abs(w_quad - w_ode) <= 1e-8
        assert abs(h_quad - h_ode) <= 1e-8


def test_monotonicity_over_dimension():
    geoms = [geometry.geometry_for(n) for n in range(2, 31)]
    ws = [g.W for g in geoms]
    hs = [g.H for g in geoms]
    assert all(a > b for a, b in zip(ws, ws[1:]))
    assert all(a > b for a, b in zip(hs, hs[1:]))


def test_geometry_cache_identity():
    a = geometry.geometry_for(17)
    b = geometry.geometry_for(17)
    assert a is b
    c = geometry.geometry_for(17, SolverConfig(rel_tol=1e-10, abs_tol=1e-12))
    assert c is not a
    assert abs(c.W - a.W) < 1e-9


def test_solve_geometry_rejects_bad_dimension():
    with pytest.raises(GeometryError):
        geometry.solve_geometry(1)
