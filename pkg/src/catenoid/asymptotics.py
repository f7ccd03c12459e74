"""Closed-form large-dimension predictions and deviation reports.

As the dimension grows the free-boundary geometry collapses onto explicit
leading-order expressions (with kappa = 2*log 2):

    L_bar = (pi/alpha) * (1 + kappa/alpha),
    W_bar = L_bar * (1 - 2/alpha),
    H_bar = ((alpha - 2) * L_bar / alpha) ** (-2/(alpha - 2)),

the even Steklov eigenvalues approach ``m - n/m``, the sub-unity mode count
approaches sqrt(n), and the log of the Morse index approaches
``sqrt(n)*log(sqrt(n)) + sqrt(n)``.  This module evaluates those
predictions and packages computed-vs-predicted deviation rows under the
rescalings that make the residual errors bounded: differences divided by
log(n) (or log(n)**2 for the index), and relative errors multiplied by
alpha for the geometry.

A separate diagnostic rescales the profile itself: c(x) = f(L*x) to the
power -(alpha-2)/2 converges to cos(pi*x/2) with relative error O(1/alpha).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from catenoid import geometry, index, spectrum
from catenoid.kernels import DEFAULT_CONFIG, SolverConfig
from catenoid.spectrum import Parity

KAPPA = 2.0 * math.log(2.0)


@dataclass(frozen=True)
class AsymptoticPrediction:
    """Leading-order predicted values at one dimension (mode optional)."""

    n: int
    alpha: float
    L_bar: float
    W_bar: float
    H_bar: float
    K_bar: float
    logMI_bar: float
    lambda_bar: float | None = None
    kappa: float = KAPPA


@dataclass(frozen=True)
class DeviationRow:
    """One computed-vs-predicted comparison under a named rescaling."""

    n: int
    m: int | None
    quantity: str
    computed: float
    predicted: float
    scaled_error: float
    scaling: str
    note: str = ""


@dataclass(frozen=True)
class DeviationReport:
    kind: str
    rows: tuple[DeviationRow, ...]


def predicted_geometry(alpha: float) -> tuple[float, float, float]:
    """Leading-order (L_bar, H_bar, W_bar) for exponent alpha > 2."""
    if not alpha > 2.0:
        raise ValueError(f"predictions need alpha > 2, got {alpha}")
    l_bar = (math.pi / alpha) * (1.0 + KAPPA / alpha)
    w_bar = l_bar * (1.0 - 2.0 / alpha)
    h_bar = ((alpha - 2.0) * l_bar / alpha) ** (-2.0 / (alpha - 2.0))
    return l_bar, h_bar, w_bar


def predicted_lambda(n: int, m: int) -> float:
    """Leading-order even Steklov eigenvalue ``m - n/m`` (m >= 1).

    Vanishes at n = m**2, where ratio-type comparisons blow up; deviation
    reports switch to difference scaling there.
    """
    if m < 1:
        raise ValueError("the eigenvalue prediction needs m >= 1")
    return m - n / m


def predicted_counts(n: int) -> tuple[float, float]:
    """(K_bar, logMI_bar) = (sqrt(n), sqrt(n)*log(sqrt(n)) + sqrt(n))."""
    root = math.sqrt(n)
    return root, root * math.log(root) + root


def predict(n: int, m: int | None = None) -> AsymptoticPrediction:
    """All leading-order predictions for dimension n in one record."""
    alpha = 2.0 * (n - 1)
    l_bar, h_bar, w_bar = predicted_geometry(alpha)
    k_bar, logmi_bar = predicted_counts(n)
    lam_bar = predicted_lambda(n, m) if m is not None else None
    return AsymptoticPrediction(n=n, alpha=alpha, L_bar=l_bar, W_bar=w_bar,
                                H_bar=h_bar, K_bar=k_bar, logMI_bar=logmi_bar,
                                lambda_bar=lam_bar)


def c_ratio(alpha: float, x: float,
            config: SolverConfig = DEFAULT_CONFIG) -> float:
    """Rescaled-profile diagnostic c(x)/cos(pi*x/2) on (-1, 1).

    c(x) = f(L*x)**(-(alpha-2)/2) shares endpoints and midpoint value with
    the cosine; the ratio stays within O(1/alpha) of 1.  Needs alpha > 2
    (finite L) and |x| < 1.
    """
    if not alpha > 2.0:
        raise ValueError("c_ratio needs alpha > 2 (finite profile interval)")
    if not -1.0 < x < 1.0:
        raise ValueError("c_ratio is defined for |x| < 1")
    if x == 0.0:
        return 1.0
    x = abs(x)  # both c and the cosine are even
    length = geometry.half_length(alpha)
    point = geometry.profile_alpha(alpha, length * x, config)
    c_val = math.exp(-0.5 * (alpha - 2.0) * math.log(point.f))
    return c_val / math.cos(0.5 * math.pi * x)


def log_spaced_ints(lo: int, hi: int, per_decade: int = 40) -> list[int]:
    """Distinct integers, approximately log-uniform over [lo, hi]."""
    if lo < 1 or hi < lo:
        raise ValueError(f"bad log range [{lo}, {hi}]")
    if lo == hi:
        return [lo]
    decades = math.log10(hi / lo)
    count = max(2, int(round(per_decade * decades)) + 1)
    ratio = (hi / lo) ** (1.0 / (count - 1))
    vals = {int(round(lo * ratio ** k)) for k in range(count)}
    vals.update((lo, hi))
    return sorted(vals)


# Ratio comparisons switch to difference scaling when the predicted value
# sits this close to zero (the spike band around n = m**2).
_SPIKE_THRESHOLD = 1.0


def _lambda_rows(n_values, m: int, config: SolverConfig) -> list[DeviationRow]:
    rows = []
    for n in n_values:
        lam = spectrum.steklov(n, m, Parity.EVEN, config).value
        lam_bar = predicted_lambda(n, m)
        log_n = math.log(n)
        near_zero = abs(lam_bar) < _SPIKE_THRESHOLD
        note = "near-zero prediction (n ~ m**2)" if near_zero else ""
        rows.append(DeviationRow(n=n, m=m, quantity="lambda", computed=lam,
                                 predicted=lam_bar,
                                 scaled_error=(lam - lam_bar) / log_n,
                                 scaling="(computed-predicted)/log(n)",
                                 note=note))
        if not near_zero:
            rows.append(DeviationRow(n=n, m=m, quantity="lambda", computed=lam,
                                     predicted=lam_bar,
                                     scaled_error=lam / lam_bar - 1.0,
                                     scaling="computed/predicted-1",
                                     note=""))
    return rows


def _k0_rows(n_values, config: SolverConfig) -> list[DeviationRow]:
    rows = []
    for n in n_values:
        k0, _ = index.count_even_modes(n, config)
        k_bar = math.sqrt(n)
        rows.append(DeviationRow(n=n, m=None, quantity="K0", computed=float(k0),
                                 predicted=k_bar,
                                 scaled_error=(k_bar - k0) / math.log(n),
                                 scaling="(predicted-computed)/log(n)"))
    return rows


def _logmi_rows(n_values, config: SolverConfig) -> list[DeviationRow]:
    rows = []
    for n in n_values:
        log_mi = index.index_report(n, config).logMI
        _, logmi_bar = predicted_counts(n)
        rows.append(DeviationRow(n=n, m=None, quantity="logMI", computed=log_mi,
                                 predicted=logmi_bar,
                                 scaled_error=(logmi_bar - log_mi) / math.log(n) ** 2,
                                 scaling="(predicted-computed)/log(n)**2"))
    return rows


def _geometry_rows(n_values, config: SolverConfig) -> list[DeviationRow]:
    rows = []
    for n in n_values:
        geom = geometry.geometry_for(n, config)
        l_bar, h_bar, w_bar = predicted_geometry(geom.alpha)
        for quantity, computed, predicted in (("L", geom.L, l_bar),
                                              ("W", geom.W, w_bar),
                                              ("H", geom.H, h_bar)):
            rows.append(DeviationRow(
                n=n, m=None, quantity=quantity, computed=computed,
                predicted=predicted,
                scaled_error=geom.alpha * (computed / predicted - 1.0),
                scaling="alpha*(computed/predicted-1)"))
    return rows


DEVIATION_KINDS = ("lambda", "K0", "logMI", "geometry")


def deviation_report(kind: str, n_values, m: int | None = None,
                     config: SolverConfig = DEFAULT_CONFIG) -> DeviationReport:
    """Computed-vs-predicted rows for one report kind over given dimensions.

    ``kind`` is one of :data:`DEVIATION_KINDS`; the lambda kind requires a
    harmonic mode m and emits both scalings per dimension (difference-only
    inside the spike band where the prediction crosses zero, so every row
    stays finite).  Rows carry data only; rendering is the CLI's business.
    """
    n_values = [int(n) for n in n_values]
    if any(n < 2 for n in n_values):
        raise ValueError("deviation reports need dimensions n >= 2")
    if kind == "lambda":
        if m is None:
            raise ValueError("kind='lambda' requires a harmonic mode m")
        rows = _lambda_rows(n_values, m, config)
    elif kind == "K0":
        rows = _k0_rows(n_values, config)
    elif kind == "logMI":
        rows = _logmi_rows(n_values, config)
    elif kind == "geometry":
        if any(n < 3 for n in n_values):
            raise ValueError("geometry predictions need n >= 3 (alpha > 2)")
        rows = _geometry_rows(n_values, config)
    else:
        raise ValueError(f"unknown report kind {kind!r}; "
                         f"expected one of {DEVIATION_KINDS}")
    return DeviationReport(kind=kind, rows=tuple(rows))
