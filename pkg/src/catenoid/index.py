"""Mode counting and the Steklov / Morse indices.

The Steklov index is the number of Steklov eigenvalues strictly below 1,
counted with spherical-harmonic multiplicity; the Morse index exceeds it by
exactly one.  Because eigenvalues increase strictly with the harmonic mode,
counting reduces to finding the first even mode whose eigenvalue reaches 1
(K0 modes lie below, including the conventional -inf at m = 0), while the
odd count K1 = 1 is pinned by the exact identity for the odd m = 1 mode.

Counting against the threshold 1 is only trustworthy when the nearest
eigenvalues keep a healthy distance from it, so every report carries the
margin and a certification flag comparing that margin with a
tolerance-halving error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from catenoid import geometry, kernels, spectrum
from catenoid.kernels import DEFAULT_CONFIG, SolverConfig
from catenoid.spectrum import Parity


class IndexComputationError(Exception):
    """Internal inconsistency or an uncertifiable mode count."""


# Exact arbitrary-size Morse indices are produced up to this dimension;
# beyond it only the logarithm is reported (the binomials involved explode).
EXACT_MI_LIMIT = 5000

# A count is certified when the margin to 1 exceeds this many multiples of
# the estimated eigenvalue error.
CERTIFY_FACTOR = 1e3


@dataclass(frozen=True)
class IndexReport:
    """Mode counts and indices for one dimension.

    ``MI`` is None above :data:`EXACT_MI_LIMIT` (use ``logMI``); ``margin``
    is the distance from 1 of the closest computed eigenvalue, and
    ``eig_error`` the tolerance-halving estimate backing ``certified``.
    """

    n: int
    K0: int
    K1: int
    SI: int | None
    MI: int | None
    logMI: float
    margin: float
    eig_error: float
    certified: bool


def harmonic_dim(n: int, m: int) -> int:
    """Dimension of the degree-m spherical harmonics on the (n-1)-sphere.

    The difference of two binomials; out-of-range binomials count as 0,
    which yields 1 at m = 0 and n at m = 1.
    """
    if n < 2 or m < 0:
        raise ValueError(f"harmonic_dim needs n >= 2, m >= 0, got ({n}, {m})")
    return (kernels.binomial_exact(n + m - 1, n - 1)
            - kernels.binomial_exact(n + m - 3, n - 1))


def _scan_even_modes(n: int, config: SolverConfig,
                     ) -> tuple[int, float, float, float]:
    """(K0, margin, last eigenvalue below 1, first at/above 1).

    Scans m = 1, 2, ... until the eigenvalue reaches 1; monotonicity in m
    makes the scan exhaustive, and the exact identity at m = n guarantees
    it stops there at the latest.
    """
    geom = geometry.geometry_for(n, config)
    last_below = -math.inf
    m = 1
    while True:
        lam = spectrum.steklov(n, m, Parity.EVEN, config, geom=geom).value
        if lam >= 1.0:
            first_above = lam
            break
        last_below = lam
        m += 1
        if m > n + 1:
            raise IndexComputationError(
                f"even-mode scan ran past m = n + 1 at n={n}; the exact "
                "identity at m = n should have stopped it")
    k0 = 1 + (m - 1)  # the -inf convention at m = 0 plus the modes found
    margin = min(1.0 - last_below, first_above - 1.0)
    return k0, margin, last_below, first_above


def _eig_error_estimate(n: int, modes: tuple[int, ...], values: tuple[float, ...],
                        config: SolverConfig) -> float:
    """Tolerance-halving error estimate for the eigenvalues nearest to 1."""
    halved = config.halved()
    geom = geometry.solve_geometry(n, halved)
    err = 0.0
    for m, lam in zip(modes, values):
        lam_h = spectrum.steklov(n, m, Parity.EVEN, halved, geom=geom).value
        err = max(err, abs(lam - lam_h))
    return max(err, 1e-15)


def count_even_modes(n: int, config: SolverConfig = DEFAULT_CONFIG,
                     ) -> tuple[int, float]:
    """Number of even modes with eigenvalue below 1, and the margin to 1."""
    k0, margin, _, _ = _scan_even_modes(n, config)
    return k0, margin


def _closed_form_index(n: int, k0: int) -> int:
    # Telescoping of the harmonic dimensions over m = 0 .. k0-1.
    return 1 + (kernels.binomial_exact(n + k0 - 2, k0 - 1)
                + kernels.binomial_exact(n + k0 - 3, k0 - 2))


def _log_closed_form_index(n: int, k0: int) -> float:
    la = kernels.log_binomial(n + k0 - 2, k0 - 1)
    lb = kernels.log_binomial(n + k0 - 3, k0 - 2)
    if la == -math.inf:
        return 0.0  # k0 <= 0 cannot occur for n >= 2; defensive
    return la + math.log1p(math.exp(lb - la) + math.exp(-la))


def check_odd_modes(n: int, config: SolverConfig = DEFAULT_CONFIG,
                    tol: float = 1e-8) -> None:
    """Diagnostic recomputation behind the fixed count K1 = 1.

    Verifies numerically that the odd m = 0 eigenvalue sits below 1 and the
    odd m = 1 eigenvalue equals 1; monotonicity in m does the rest.  Raises
    :class:`IndexComputationError` on violation.
    """
    geom = geometry.geometry_for(n, config)
    lam0 = spectrum.steklov(n, 0, Parity.ODD, config, geom=geom).value
    lam1 = spectrum.steklov(n, 1, Parity.ODD, config, geom=geom).value
    if not lam0 < 1.0:
        raise IndexComputationError(f"odd m=0 eigenvalue {lam0} >= 1 at n={n}")
    if abs(lam1 - 1.0) > tol:
        raise IndexComputationError(
            f"odd m=1 eigenvalue {lam1} deviates from 1 at n={n}")


def index_report(n: int, config: SolverConfig = DEFAULT_CONFIG,
                 exact_limit: int = EXACT_MI_LIMIT,
                 check_odd: bool = False) -> IndexReport:
    """Full mode-count and index report for one dimension.

    The Morse index is produced twice, from the multiplicity sum and from
    its telescoped closed form, and the two must agree exactly.
    """
    k0, margin, last_below, first_above = _scan_even_modes(n, config)
    err = _eig_error_estimate(n, (k0 - 1, k0), (last_below, first_above), config)
    certified = margin > CERTIFY_FACTOR * err
    if check_odd:
        check_odd_modes(n, config)

    if n <= exact_limit:
        si = sum(harmonic_dim(n, m) for m in range(k0))
        mi = si + 1
        closed = _closed_form_index(n, k0)
        if mi != closed:
            raise IndexComputationError(
                f"index routes disagree at n={n}: multiplicity sum gives "
                f"{mi}, closed form gives {closed}")
        log_mi = math.log(mi)
    else:
        si = None
        mi = None
        log_mi = _log_closed_form_index(n, k0)

    return IndexReport(n=int(n), K0=k0, K1=1, SI=si, MI=mi, logMI=log_mi,
                       margin=margin, eig_error=err, certified=certified)


def steklov_index(n: int, config: SolverConfig = DEFAULT_CONFIG) -> int:
    """Multiplicity-weighted count of Steklov eigenvalues below 1."""
    report = index_report(n, config)
    if report.SI is None:
        raise IndexComputationError(
            f"exact index not available above n={EXACT_MI_LIMIT}; "
            "use log_morse_index")
    return report.SI


def morse_index(n: int, config: SolverConfig = DEFAULT_CONFIG) -> int:
    """Exact Morse index: the Steklov index plus one."""
    report = index_report(n, config)
    if report.MI is None:
        raise IndexComputationError(
            f"exact index not available above n={EXACT_MI_LIMIT}; "
            "use log_morse_index")
    return report.MI


def log_morse_index(n: int, config: SolverConfig = DEFAULT_CONFIG) -> float:
    """Natural log of the Morse index, exact-path or log-gamma path.

    Agrees with ``log(morse_index(n))`` wherever the exact path runs and
    stays finite far beyond it.
    """
    return index_report(n, config).logMI
