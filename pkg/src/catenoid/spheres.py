"""Spectral bookkeeping for minimal products of spheres.

The product of a p-sphere and a q-sphere (radii sqrt(p/(p+q)) and
sqrt(q/(p+q))) is a minimal hypersurface of the round (p+q+1)-sphere.  Its
stability operator diagonalizes over pairs (i, j) of sphere harmonics with
the rational eigenvalue

    ((p+q)/(p*q)) * (i*q*(i+p-1) + j*p*(j+q-1)) - 2*(p+q),

which vanishes at (1, 1) and is strictly increasing in each order.  Only
(0, 0), (1, 0) and (0, 1) are negative, with degeneracies 1, p+1 and q+1,
so the Morse index is p + q + 3; :func:`sphere_morse_index` recovers that
number by exhaustive enumeration and cross-checks it against the
closed-form count.

Eigenvalue signs are decided in exact integer arithmetic (the numerator
over the common denominator p*q), so the zero at (1, 1) is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from catenoid.index import harmonic_dim


class SphereIndexError(Exception):
    """The enumeration and the closed-form count disagree."""


@dataclass(frozen=True)
class SphereProductMode:
    """One harmonic mode (i, j) of the stability operator of the product."""

    p: int
    q: int
    i: int
    j: int
    eigenvalue: float
    degeneracy: int


def _check_pq(p: int, q: int) -> None:
    if p < 1 or q < 1:
        raise ValueError(f"sphere factors need p, q >= 1, got ({p}, {q})")


def eigenvalue_numerator(p: int, q: int, i: int, j: int) -> int:
    """Exact integer p*q times the mode eigenvalue."""
    return (p + q) * (i * q * (i + p - 1) + j * p * (j + q - 1) - 2 * p * q)


def sphere_mode_eigenvalue(p: int, q: int, i: int, j: int) -> float:
    """Stability eigenvalue of the (i, j) harmonic mode of the product."""
    _check_pq(p, q)
    if i < 0 or j < 0:
        raise ValueError("harmonic orders must be non-negative")
    return float(Fraction(eigenvalue_numerator(p, q, i, j), p * q))


def sphere_mode_degeneracy(p: int, q: int, i: int, j: int) -> int:
    """Dimension of the (i, j) harmonic product space."""
    return harmonic_dim(p + 1, i) * harmonic_dim(q + 1, j)


def sphere_mode(p: int, q: int, i: int, j: int) -> SphereProductMode:
    return SphereProductMode(p=p, q=q, i=i, j=j,
                             eigenvalue=sphere_mode_eigenvalue(p, q, i, j),
                             degeneracy=sphere_mode_degeneracy(p, q, i, j))


def scan_bound(p: int, q: int) -> int:
    """Order bound i + j <= bound that provably covers every negative mode.

    The eigenvalue increases strictly in each order and vanishes at (1, 1),
    so negatives need i = 0 or j = 0; on those rows the integer quadratic
    turns positive from order 2 on.  The generous bound keeps the scan an
    independent check rather than an argument.
    """
    return 2 * max(p, q) + 2


def negative_modes(p: int, q: int) -> list[SphereProductMode]:
    """Every mode with a strictly negative eigenvalue, by exhaustive scan."""
    _check_pq(p, q)
    bound = scan_bound(p, q)
    found = []
    for i in range(bound + 1):
        for j in range(bound + 1 - i):
            if eigenvalue_numerator(p, q, i, j) < 0:
                found.append(sphere_mode(p, q, i, j))
    return found


def _negative_row_orders(p: int) -> list[int]:
    """Orders i with i**2 + i*(p-1) - 2*p < 0, solved exactly."""
    return [i for i in range(2 * p + 3) if i * i + i * (p - 1) - 2 * p < 0]


def sphere_morse_index(p: int, q: int) -> int:
    """Degeneracy-weighted count of negative modes; equals p + q + 3.

    Computed twice: by the exhaustive scan of :func:`negative_modes` and
    from the row quadratics at i = 0 / j = 0 (whose negative integer orders
    are exactly {0, 1}).  A mismatch raises :class:`SphereIndexError`.
    """
    _check_pq(p, q)
    scanned = sum(mode.degeneracy for mode in negative_modes(p, q))
    row_i = _negative_row_orders(p)   # orders i on the j = 0 row
    row_j = _negative_row_orders(q)   # orders j on the i = 0 row
    closed = (sum(harmonic_dim(p + 1, i) for i in row_i)
              + sum(harmonic_dim(q + 1, j) for j in row_j)
              - 1)  # (0, 0) sits on both rows
    if scanned != closed:
        raise SphereIndexError(
            f"negative-mode scan gives {scanned} but the row quadratics "
            f"give {closed} at (p, q) = ({p}, {q})")
    return scanned
