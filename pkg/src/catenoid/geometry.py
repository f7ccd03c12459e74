"""Profile curve and free-boundary geometry of the rotationally symmetric
minimal hypersurface.

The generating profile f solves ``f_x = sqrt(f**alpha - 1)`` with
``f(0) = 1`` and ``alpha = 2*(n - 1)``; it is defined on a maximal interval
``(-L, L)`` (infinite exactly at alpha = 2, the catenary case).  The free
boundary sits at the unique abscissa W in (0, L) where the surface meets a
sphere orthogonally, ``W * f_x(W) = f(W) =: H``, and the surface fits the
unit ball after rescaling by ``R = sqrt(W**2 + H**2)``.

Two independent solution routes are maintained:

* the W-route integrates the profile ODE and locates the root of
  ``x*f_x(x) - f(x)`` with an event;
* the H-route (the primary one) expresses the inverse profile as the
  endpoint-singular integral ``g(y) = int_1^y (s**alpha - 1)**-1/2 ds``,
  evaluates it by tanh-sinh quadrature, and solves
  ``g(y)*sqrt(y**(2n-2) - 1)/y = 1`` for H with Brent's method.

Both must agree to 1e-8 or :func:`solve_geometry` refuses the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from catenoid import kernels
from catenoid.kernels import (Bracket, IntegrationError, SolverConfig,
                              DEFAULT_CONFIG)


class GeometryError(Exception):
    """Geometry solve failed (bad input, bracketing, or route disagreement)."""


# Quadrature/root tolerances are tied to the ODE tolerance so that halving a
# SolverConfig tightens every route consistently.
_QUAD_FACTOR = 0.1
_ROOT_FACTOR = 0.1

# W is decreasing in the dimension with supremum W(2) < 1.2, so the
# free-boundary event always fires inside this span.
_X_SPAN = 4.0

# Agreement demanded between the two solution routes.
ROUTE_TOL = 1e-8


@dataclass(frozen=True)
class ProfilePoint:
    """Profile value and slope at one abscissa: f_x**2 = f**alpha - 1."""

    x: float
    f: float
    f_x: float


@dataclass(frozen=True)
class CatenoidGeometry:
    """Solved free-boundary scalars for one dimension.

    Attributes
    ----------
    n : int
        Hypersurface dimension (ambient ball is (n+1)-dimensional), n >= 2.
    alpha : float
        Profile exponent 2*(n - 1).
    L : float
        Half-length of the maximal interval of the profile; ``math.inf``
        exactly when n = 2.
    W : float
        Free-boundary abscissa, 0 < W < L.
    H : float
        Boundary radius f(W) > 1.
    R : float
        Rescaling factor sqrt(W**2 + H**2) that fits the surface to the
        unit ball.  Reported for completeness; no downstream computation
        consumes it.
    """

    n: int
    alpha: float
    L: float
    W: float
    H: float
    R: float


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not alpha >= 2.0:
        raise GeometryError(f"profile exponent must be >= 2, got {alpha}")
    return alpha


def _alpha_of(n: int) -> float:
    if int(n) != n or n < 2:
        raise GeometryError(f"dimension must be an integer >= 2, got {n}")
    return 2.0 * (n - 1)


def _profile_rhs(alpha: float):
    # f'' = (alpha/2) * (1 + f_x**2) / f, the form that avoids evaluating
    # the huge power f**(alpha-1) directly.
    half_alpha = 0.5 * alpha
    def rhs(x, y):
        f, fx = y
        return (fx, half_alpha * (1.0 + fx * fx) / f)
    return rhs


def profile_alpha(alpha: float, x: float,
                  config: SolverConfig = DEFAULT_CONFIG) -> ProfilePoint:
    """Profile point (f, f_x) at abscissa x >= 0 for real exponent alpha."""
    alpha = _check_alpha(alpha)
    x = float(x)
    if x < 0.0:
        raise GeometryError("profile is evaluated for x >= 0 (it is even)")
    if x == 0.0:
        return ProfilePoint(x=0.0, f=1.0, f_x=0.0)
    try:
        f, fx = kernels.integrate_ivp(_profile_rhs(alpha), (1.0, 0.0),
                                      (0.0, x), config)
    except IntegrationError as exc:
        raise GeometryError(
            f"x={x} lies beyond the maximal interval of the profile "
            f"(blow-up near x={exc.last_x:.9g})") from exc
    return ProfilePoint(x=x, f=float(f), f_x=float(fx))


def profile(n: int, x: float, config: SolverConfig = DEFAULT_CONFIG) -> ProfilePoint:
    """Profile point (f(x), f_x(x)) for integer dimension n >= 2."""
    return profile_alpha(_alpha_of(n), x, config)


def profile_grid(alpha: float, xs,
                 config: SolverConfig = DEFAULT_CONFIG) -> np.ndarray:
    """(f, f_x) rows on an increasing grid of abscissae starting at 0."""
    alpha = _check_alpha(alpha)
    return kernels.integrate_on_grid(_profile_rhs(alpha), (1.0, 0.0), xs, config)


def _arc_length_integrand(alpha: float):
    # g(y) = int_0^{y-1} (e^{alpha*log1p(u)} - 1)^(-1/2) du after the shift
    # u = s - 1, which puts the inverse-square-root singularity at u = 0
    # where doubles keep full relative precision.
    def integrand(u):
        return 1.0 / np.sqrt(np.expm1(alpha * np.log1p(u)))
    return integrand


def inverse_profile_alpha(alpha: float, y: float,
                          tol: float = kernels.DEFAULT_QUAD_TOL) -> float:
    """Inverse profile g(y): the abscissa where f reaches y >= 1."""
    alpha = _check_alpha(alpha)
    y = float(y)
    if y < 1.0:
        raise GeometryError(f"inverse profile needs y >= 1, got {y}")
    if y == 1.0:
        return 0.0
    return kernels.quad_tanh_sinh(_arc_length_integrand(alpha), 0.0, y - 1.0,
                                  tol=tol)


def inverse_profile(n: int, y: float,
                    tol: float = kernels.DEFAULT_QUAD_TOL) -> float:
    """Inverse profile for integer dimension n: g(f(x)) = x."""
    return inverse_profile_alpha(_alpha_of(n), y, tol)


def half_length(n_or_alpha: float) -> float:
    """Half-length L of the profile's maximal interval.

    Closed form ``L = beta(1/2 - 1/alpha, 1/2) / alpha`` through log-gamma;
    infinite exactly at alpha = 2.  Pass either the exponent alpha or (for
    integer input >= 2 treated as a dimension) n via ``2*(n-1)`` yourself:
    this function takes alpha.
    """
    alpha = _check_alpha(n_or_alpha)
    if alpha == 2.0:
        return math.inf
    return kernels.beta(0.5 - 1.0 / alpha, 0.5) / alpha


def _free_boundary_event(x, y):
    return x * y[1] - y[0]


def _solve_w_route(alpha: float, config: SolverConfig) -> tuple[float, float, float]:
    """(W, H, f_x(W)) from ODE integration with a terminal event.

    The event function x*f_x - f starts at -1 and increases strictly, so
    the crossing is unique and cannot be stepped over undetected.
    """
    try:
        x, y = kernels.integrate_to_event(_profile_rhs(alpha), (1.0, 0.0),
                                          (0.0, _X_SPAN), _free_boundary_event,
                                          config)
    except IntegrationError as exc:
        raise GeometryError("free-boundary event never fired") from exc
    return x, float(y[0]), float(y[1])


def _solve_h_route(alpha: float, quad_tol: float, root_tol: float,
                   ) -> tuple[float, float]:
    """(W, H) from quadrature: H is the root of g(y)*sqrt(y**alpha - 1)/y - 1.

    The objective is negative as y -> 1+ and grows without bound, but for
    very large alpha it overflows well before y = 2; the upper bracket end
    is pulled toward 1 until the objective is finite (and positive) there.
    """
    def objective(y):
        exponent = alpha * math.log(y)
        if exponent > 700.0:  # the root factor alone dwarfs 1/g
            return math.inf
        g = inverse_profile_alpha(alpha, y, tol=quad_tol)
        return g * math.sqrt(math.expm1(exponent)) / y - 1.0

    lo = 1.0 + 1e-9
    hi = 2.0
    f_hi = objective(hi)
    while not math.isfinite(f_hi):
        hi = 1.0 + 0.5 * (hi - 1.0)
        if hi - 1.0 < 1e-8:
            raise GeometryError("could not find a finite bracket endpoint for H")
        f_hi = objective(hi)
    if f_hi < 0.0:
        bracket = kernels.expand_bracket(objective, lo, hi)
    else:
        bracket = Bracket(lo, hi)
    H = kernels.find_root(objective, bracket, tol=root_tol)
    W = inverse_profile_alpha(alpha, H, tol=quad_tol)
    return W, H


def solve_geometry(n: int, config: SolverConfig = DEFAULT_CONFIG,
                   quad_tol: float | None = None,
                   root_tol: float | None = None,
                   cross_check: bool = True) -> CatenoidGeometry:
    """Free-boundary scalars (L, W, H, R) for dimension n >= 2.

    The quadrature H-route provides the primary values; the ODE W-route
    must agree on W to :data:`ROUTE_TOL` (a disagreement signals a kernel
    bug and raises :class:`GeometryError`).  Quad/root tolerances default
    to a fixed fraction of ``config.rel_tol`` so halving the configuration
    tightens every route.
    """
    alpha = _alpha_of(n)
    if quad_tol is None:
        quad_tol = config.rel_tol * _QUAD_FACTOR
    if root_tol is None:
        root_tol = config.rel_tol * _ROOT_FACTOR

    W, H = _solve_h_route(alpha, quad_tol, root_tol)
    if cross_check:
        W_ode, H_ode, _ = _solve_w_route(alpha, config)
        if abs(W - W_ode) > ROUTE_TOL or abs(H - H_ode) > ROUTE_TOL:
            raise GeometryError(
                f"route disagreement at n={n}: quadrature (W={W:.12g}, "
                f"H={H:.12g}) vs ODE (W={W_ode:.12g}, H={H_ode:.12g})")

    L = half_length(alpha)
    if not 0.0 < W < L:
        raise GeometryError(f"solved W={W} escapes (0, L={L}) at n={n}")
    return CatenoidGeometry(n=int(n), alpha=alpha, L=L, W=W, H=H,
                            R=math.hypot(W, H))


@lru_cache(maxsize=4096)
def geometry_for(n: int, config: SolverConfig = DEFAULT_CONFIG) -> CatenoidGeometry:
    """Cached :func:`solve_geometry`; safe for concurrent reads and fills."""
    return solve_geometry(n, config)
