import math

import pytest

from catenoid import index
from catenoid.index import IndexComputationError
from catenoid.kernels import SolverConfig, binomial_exact


def test_harmonic_dim_small_cases():
    assert all(index.harmonic_dim(2, m) == 2 for m in range(1, 10))
    assert index.harmonic_dim(3, 2) == 5
    for n in (2, 5, 11):
        assert index.harmonic_dim(n, 0) == 1
        assert index.harmonic_dim(n, 1) == n
    with pytest.raises(ValueError):
        index.harmonic_dim(1, 0)


def test_harmonic_dim_telescoping():
    for n in range(2, 51):
        for k in range(1, 13):
            total = sum(index.harmonic_dim(n, m) for m in range(k))
            closed = (binomial_exact(n + k - 2, k - 1)
                      + binomial_exact(n + k - 3, k - 2))
            assert total == closed


@pytest.mark.parametrize("n,k0", [(2, 2), (5, 3), (12, 4), (35, 6), (91, 9)])
def test_count_even_modes(n, k0):
    count, margin = index.count_even_modes(n)
    assert count == k0
    assert margin > 4e-3


def test_margin_at_the_tight_dimension():
    _, margin = index.count_even_modes(91)
    assert abs(margin - 4.55e-3) < 1e-4


@pytest.mark.parametrize("n,si", [(2, 3), (5, 20), (12, 442)])
def test_steklov_index(n, si):
    assert index.steklov_index(n) == si


@pytest.mark.parametrize("n,mi", [(2, 4), (3, 5), (4, 6), (5, 21), (12, 443),
                                  (100, 350319724626)])
def test_morse_index(n, mi):
    assert index.morse_index(n) == mi


def test_report_routes_cross_check(reference_index):
    for n in (2, 17, 44, 91):
        rep = index.index_report(n)
        k0_ref, mi_ref = reference_index[n]
        assert rep.K0 == k0_ref
        assert rep.MI == mi_ref
        assert rep.MI == rep.SI + 1
        assert rep.MI == index._closed_form_index(n, rep.K0)
        assert rep.K1 == 1
        assert rep.certified


def test_log_morse_index_values():
    assert abs(index.log_morse_index(100) - math.log(350319724626)) < 1e-12
    assert abs(index.log_morse_index(2) - math.log(4)) < 1e-12


def test_log_route_agrees_with_exact_route():
    for n in (25, 50, 100):
        rep = index.index_report(n)
        log_direct = index._log_closed_form_index(n, rep.K0)
        assert abs(log_direct - rep.logMI) <= 1e-12 * rep.logMI


def test_log_only_reports_beyond_exact_limit():
    rep = index.index_report(40, exact_limit=10)
    assert rep.MI is None and rep.SI is None
    assert math.isfinite(rep.logMI)
    full = index.index_report(40)
    assert abs(rep.logMI - full.logMI) <= 1e-12 * full.logMI


def test_k0_growth_over_small_dimensions(reference_index):
    previous = 0
    for n in range(2, 41):
        k0, _ = index.count_even_modes(n)
        assert k0 == reference_index[n][0]
        assert previous <= k0 <= n
        previous = k0


def test_certification_loosens_with_tolerance():
    rep = index.index_report(11, SolverConfig(rel_tol=1e-4, abs_tol=1e-6))
    assert rep.K0 == 3  # the count itself survives a sloppy tolerance
    tight = index.index_report(11)
    assert tight.certified
    assert tight.eig_error < 1e-9


def test_odd_mode_diagnostic():
    for n in (2, 9, 17):
        index.check_odd_modes(n)
