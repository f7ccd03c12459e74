"""Harmonic Jacobi-mode solutions and Steklov eigenvalues.

In the m'th spherical-harmonic mode the second-variation operator reduces
to a linear second-order ODE for the mode profile phi along the axis:

    phi_xx = (m*(m + n - 2)*(1 + f_x**2) - n*(n - 1)) * phi / f**2,

coupled to the surface profile f.  Even modes start from
``phi(0) = 1, phi_x(0) = 0`` and odd modes from ``phi(0) = 0,
phi_x(0) = 1``.  The Steklov eigenvalue of the mode is the boundary
Dirichlet-to-Neumann ratio ``W * phi_x(W) / phi(W)``; by convention the
even m = 0 mode carries the eigenvalue -inf.

Eight mode profiles have closed forms built from f alone (they arise from
ambient Killing fields and from powers of f); they are exposed through
:func:`closed_form_field` and serve as independent oracles for the ODE
path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from catenoid import geometry, kernels
from catenoid.geometry import CatenoidGeometry, GeometryError
from catenoid.kernels import DEFAULT_CONFIG, SolverConfig


class SpectrumError(Exception):
    """Mode integration failed or produced unusable terminal data."""


class Parity(IntEnum):
    """Symmetry of a mode across the neck: even = 0, odd = 1."""

    EVEN = 0
    ODD = 1


def as_parity(value) -> Parity:
    """Coerce 0/1, 'even'/'odd' or a Parity into a Parity."""
    if isinstance(value, Parity):
        return value
    if isinstance(value, str):
        try:
            return Parity[value.upper()]
        except KeyError:
            raise SpectrumError(f"unknown parity {value!r}") from None
    if value in (0, 1):
        return Parity(value)
    raise SpectrumError(f"unknown parity {value!r}")


# Mode amplitudes above this magnitude switch the integration to the
# log-derivative (Riccati) form; the eigenvalue only needs the ratio
# phi_x / phi, which stays well scaled.
GROWTH_LIMIT = 1e100


@dataclass(frozen=True)
class ModeSolution:
    """Terminal data of one Jacobi-mode initial value problem.

    ``rescaled`` flags solutions whose amplitude exceeded
    :data:`GROWTH_LIMIT`; the pair (phi_W, phiX_W) is then only meaningful
    up to a positive factor (normalized so phi_W = 1), which is all the
    Steklov ratio needs.
    """

    n: int
    m: int
    parity: Parity
    phi_W: float
    phiX_W: float
    rescaled: bool = False


@dataclass(frozen=True)
class SteklovEigenvalue:
    """One Steklov eigenvalue: the boundary ratio of a Jacobi mode."""

    n: int
    m: int
    parity: Parity
    value: float  # -inf for the even m = 0 convention


def _check_mode(n: int, m: int) -> None:
    if int(n) != n or n < 2:
        raise SpectrumError(f"dimension must be an integer >= 2, got {n}")
    if int(m) != m or m < 0:
        raise SpectrumError(f"harmonic mode must be an integer >= 0, got {m}")


def _mode_rhs(n: int, m: int):
    c_mode = float(m * (m + n - 2))
    c_curv = float(n * (n - 1))
    half_alpha = float(n - 1)

    def rhs(x, y):
        f, fx, p, px = y
        one_plus = 1.0 + fx * fx
        return (fx,
                half_alpha * one_plus / f,
                px,
                (c_mode * one_plus - c_curv) * p / (f * f))

    return rhs


def _riccati_rhs(n: int, m: int):
    c_mode = float(m * (m + n - 2))
    c_curv = float(n * (n - 1))
    half_alpha = float(n - 1)

    def rhs(x, y):
        f, fx, u = y
        one_plus = 1.0 + fx * fx
        return (fx,
                half_alpha * one_plus / f,
                (c_mode * one_plus - c_curv) / (f * f) - u * u)

    return rhs


def _growth_event(x, y):
    return max(abs(y[2]), abs(y[3])) - GROWTH_LIMIT


def jacobi_mode_solution(n: int, m: int, parity, config: SolverConfig = DEFAULT_CONFIG,
                         geom: CatenoidGeometry | None = None) -> ModeSolution:
    """Integrate the coupled (f, f_x, phi, phi_x) system over [0, W].

    The profile advances together with the mode so no interpolation error
    enters.  If the amplitude passes :data:`GROWTH_LIMIT` the run switches
    to the log-derivative u = phi_x/phi and finishes in Riccati form
    (possible because the mode profile cannot vanish on (0, W] except for
    the even m = 0 mode, which never grows).
    """
    _check_mode(n, m)
    parity = as_parity(parity)
    if geom is None:
        geom = geometry.geometry_for(n, config)
    y0 = (1.0, 0.0, 1.0 - float(parity), float(parity))

    res = kernels._drive(_mode_rhs(n, m), y0, (0.0, geom.W), config,
                         events=(_growth_event,))
    if res.event_index is None:
        f, fx, p, px = res.y
        return ModeSolution(n=n, m=m, parity=parity,
                            phi_W=float(p), phiX_W=float(px))

    # Riccati continuation from the switch point.
    f, fx, p, px = res.y
    if p == 0.0:
        raise SpectrumError(f"mode (n={n}, m={m}, {parity.name}) hit the "
                            "growth limit with a vanishing amplitude")
    u0 = (f, fx, px / p)
    end = kernels.integrate_ivp(_riccati_rhs(n, m), u0, (res.x, geom.W), config)
    return ModeSolution(n=n, m=m, parity=parity,
                        phi_W=1.0, phiX_W=float(end[2]), rescaled=True)


def mode_profile(n: int, m: int, parity, xs,
                 config: SolverConfig = DEFAULT_CONFIG,
                 geom: CatenoidGeometry | None = None) -> np.ndarray:
    """Mode values phi on an increasing grid of abscissae in [0, W]."""
    _check_mode(n, m)
    parity = as_parity(parity)
    if geom is None:
        geom = geometry.geometry_for(n, config)
    xs = np.asarray(xs, dtype=float)
    if xs.size and xs[-1] > geom.W * (1 + 1e-12):
        raise SpectrumError("grid extends beyond the free boundary")
    y0 = (1.0, 0.0, 1.0 - float(parity), float(parity))
    rows = kernels.integrate_on_grid(_mode_rhs(n, m), y0, xs, config)
    return rows[:, 2]


def steklov(n: int, m: int, parity, config: SolverConfig = DEFAULT_CONFIG,
            geom: CatenoidGeometry | None = None) -> SteklovEigenvalue:
    """Steklov eigenvalue ``W * phi_x(W) / phi(W)`` of mode (n, m, parity).

    The even m = 0 mode returns -inf by convention.  A vanishing phi(W)
    for any other mode signals integrator trouble and raises
    :class:`SpectrumError` (the mode profiles are strictly positive on
    (0, W] away from that one exceptional mode).
    """
    _check_mode(n, m)
    parity = as_parity(parity)
    if parity is Parity.EVEN and m == 0:
        return SteklovEigenvalue(n=n, m=m, parity=parity, value=-math.inf)
    if geom is None:
        geom = geometry.geometry_for(n, config)
    sol = jacobi_mode_solution(n, m, parity, config, geom=geom)
    scale = max(1.0, abs(sol.phiX_W) * geom.W)
    if abs(sol.phi_W) <= 1e-12 * scale:
        raise SpectrumError(
            f"phi(W) ~ 0 for mode (n={n}, m={m}, {parity.name}); "
            "the boundary ratio is not trustworthy")
    return SteklovEigenvalue(n=n, m=m, parity=parity,
                             value=geom.W * sol.phiX_W / sol.phi_W)


# =============================================================================
# CLOSED-FORM MODE PROFILES (oracles for the ODE path)
# =============================================================================

CLOSED_FORM_TAGS = ("even0", "odd0", "even1", "odd1",
                    "even_nm1", "even_n", "odd_2nm2", "odd_2nm1")


def closed_form_mode(n: int, tag: str) -> tuple[int, Parity]:
    """The (m, parity) pair a closed-form tag refers to at dimension n."""
    table = {
        "even0": (0, Parity.EVEN),
        "odd0": (0, Parity.ODD),
        "even1": (1, Parity.EVEN),
        "odd1": (1, Parity.ODD),
        "even_nm1": (n - 1, Parity.EVEN),
        "even_n": (n, Parity.EVEN),
        "odd_2nm2": (2 * n - 2, Parity.ODD),
        "odd_2nm1": (2 * n - 1, Parity.ODD),
    }
    try:
        return table[tag]
    except KeyError:
        raise SpectrumError(f"unknown closed-form tag {tag!r}") from None


def closed_form_scale(n: int, tag: str) -> float:
    """Initial-condition normalization of a closed form.

    Dividing the closed form by this factor matches the unit initial data
    of the integrated modes (phi(0) = 1 for even, phi_x(0) = 1 for odd).
    """
    if tag == "odd_2nm2":
        return 3.0 * (n - 1) ** 2
    if tag == "odd_2nm1":
        return float(n - 1)
    if tag in CLOSED_FORM_TAGS:
        return 1.0
    raise SpectrumError(f"unknown closed-form tag {tag!r}")


def _closed_form_value(n: int, tag: str, x: float, f: float, fx: float) -> float:
    if tag == "even0":
        return f ** (2 - n) - x * fx * f ** (1 - n)
    if tag == "odd0":
        return fx * f ** (1 - n) / (n - 1)
    if tag == "even1":
        return f ** (1 - n)
    if tag == "odd1":
        return (fx * f ** (2 - n) + x * f ** (1 - n)) / n
    if tag == "even_nm1":
        return ((n - 2) * f ** (n - 1) + f ** (1 - n)) / (n - 1)
    if tag == "even_n":
        return f ** n
    if tag == "odd_2nm2":
        return (3 * n - 4) * fx * f ** (n - 1) + fx * f ** (1 - n)
    if tag == "odd_2nm1":
        return fx * f ** n
    raise SpectrumError(f"unknown closed-form tag {tag!r}")


def closed_form_field(n: int, tag: str, x: float,
                      config: SolverConfig = DEFAULT_CONFIG) -> float:
    """Exact mode-profile value built analytically from the surface profile.

    Available tags (mode, parity at dimension n) are listed in
    :data:`CLOSED_FORM_TAGS`; the normalization is the natural one of each
    closed form, see :func:`closed_form_scale`.
    """
    _check_mode(n, 0)
    pt = geometry.profile(n, x, config)
    return _closed_form_value(n, tag, pt.x, pt.f, pt.f_x)


def closed_form_grid(n: int, tag: str, xs,
                     config: SolverConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Closed-form values on a grid, sharing one profile integration."""
    xs = np.asarray(xs, dtype=float)
    rows = geometry.profile_grid(2.0 * (n - 1), xs, config)
    return np.array([_closed_form_value(n, tag, x, f, fx)
                     for x, (f, fx) in zip(xs, rows)])
