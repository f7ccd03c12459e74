import math

import numpy as np
import pytest

from catenoid import geometry, spectrum
from catenoid.spectrum import Parity, SpectrumError


def test_parity_coercion():
    assert spectrum.as_parity("even") is Parity.EVEN
    assert spectrum.as_parity("ODD") is Parity.ODD
    assert spectrum.as_parity(0) is Parity.EVEN
    assert spectrum.as_parity(Parity.ODD) is Parity.ODD
    with pytest.raises(SpectrumError):
        spectrum.as_parity("sideways")


def test_even_zero_mode_vanishes_at_boundary():
    for n in (2, 5, 12, 20):
        sol = spectrum.jacobi_mode_solution(n, 0, Parity.EVEN)
        assert abs(sol.phi_W) <= 1e-8


def test_steklov_convention_even_zero():
    assert spectrum.steklov(9, 0, Parity.EVEN).value == -math.inf


def test_steklov_identity_at_m_equals_n():
    for n in range(2, 21):
        lam = spectrum.steklov(n, n, Parity.EVEN).value
        assert abs(lam - n) <= 1e-8


def test_steklov_identity_odd_rotation_mode():
    for n in range(2, 21):
        lam = spectrum.steklov(n, 1, Parity.ODD).value
        assert abs(lam - 1.0) <= 1e-8


def test_steklov_even_first_mode_closed_value():
    # the translation mode gives exactly 1 - n at the free boundary
    for n in (2, 6, 15):
        lam = spectrum.steklov(n, 1, Parity.EVEN).value
        assert abs(lam - (1 - n)) <= 1e-9


@pytest.mark.parametrize("n,m,expected", [
    (2, 2, 2.00000),
    (4, 2, 1.03016),
    (11, 3, 1.02647),
    (20, 10, 9.66755),
    (91, 8, 0.99545),
])
def test_published_eigenvalues(n, m, expected):
    lam = spectrum.steklov(n, m, Parity.EVEN).value
    assert abs(lam - expected) < 1e-5


def test_eigenvalue_table_sample(reference_eigenvalues):
    for (n, m) in [(2, 5), (7, 2), (13, 9), (19, 3), (20, 2)]:
        lam = spectrum.steklov(n, m, Parity.EVEN).value
        assert abs(lam - reference_eigenvalues[(n, m)]) < 1e-5


def test_oracle_equivalence_on_grids():
    for n in range(2, 13):
        geom = geometry.geometry_for(n)
        xs = np.linspace(0.0, geom.W, 20)
        for tag in spectrum.CLOSED_FORM_TAGS:
            m, parity = spectrum.closed_form_mode(n, tag)
            ivp = spectrum.mode_profile(n, m, parity, xs, geom=geom)
            oracle = (spectrum.closed_form_grid(n, tag, xs)
                      / spectrum.closed_form_scale(n, tag))
            err = np.abs(ivp - oracle) / np.maximum(1.0, np.abs(oracle))
            assert np.max(err) <= 1e-8, (n, tag, np.max(err))


def test_closed_form_point_values():
    assert spectrum.closed_form_field(5, "even1", 0.0) == 1.0
    assert spectrum.closed_form_field(5, "odd0", 0.0) == 0.0
    geom = geometry.geometry_for(3)
    cube = spectrum.closed_form_field(3, "even_n", geom.W)
    assert abs(cube - geom.H ** 3) < 1e-9
    assert abs(cube - 4.12) < 5e-3
    with pytest.raises(SpectrumError):
        spectrum.closed_form_field(4, "even42", 0.1)


def test_monotonicity_in_mode_number():
    for n in (2, 5, 9):
        for parity in (Parity.EVEN, Parity.ODD):
            start = 1 if parity is Parity.EVEN else 0
            lams = [spectrum.steklov(n, m, parity).value
                    for m in range(start, 2 * n + 1)]
            assert all(a < b for a, b in zip(lams, lams[1:]))


def test_parity_ordering():
    for n in (2, 5, 9):
        for m in range(1, 2 * n + 1):
            even = spectrum.steklov(n, m, Parity.EVEN).value
            odd = spectrum.steklov(n, m, Parity.ODD).value
            assert odd > even


def test_mode_positivity_away_from_center():
    for n, m, parity in [(3, 2, Parity.EVEN), (3, 2, Parity.ODD),
                         (8, 0, Parity.ODD), (8, 8, Parity.EVEN)]:
        geom = geometry.geometry_for(n)
        xs = np.linspace(0.0, geom.W, 40)[1:]
        values = spectrum.mode_profile(n, m, parity, xs, geom=geom)
        assert np.all(values > 0.0), (n, m, parity)


def test_growth_switch_matches_linear_path(monkeypatch):
    lam_linear = spectrum.steklov(6, 700, Parity.EVEN).value
    monkeypatch.setattr(spectrum, "GROWTH_LIMIT", 1e30)
    sol = spectrum.jacobi_mode_solution(6, 700, Parity.EVEN)
    assert sol.rescaled and sol.phi_W == 1.0
    lam_riccati = spectrum.steklov(6, 700, Parity.EVEN).value
    assert abs(lam_riccati / lam_linear - 1.0) < 1e-10


def test_mode_solution_validation():
    with pytest.raises(SpectrumError):
        spectrum.jacobi_mode_solution(1, 2, Parity.EVEN)
    with pytest.raises(SpectrumError):
        spectrum.jacobi_mode_solution(4, -1, Parity.EVEN)
    with pytest.raises(SpectrumError):
        spectrum.mode_profile(4, 1, Parity.EVEN, [0.0, 10.0])
