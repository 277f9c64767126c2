"""Szego outer function and the pointwise entropy of a circle measure.

The outer function D of a measure with log-integrable density w satisfies
|D|^2 = w on the boundary and D(0) > 0.  The entropy at an interior point z
compares the harmonic extension of the full measure against the geometric
mean seen through log w:

    entropy(mu, z) = log P(mu, z) - P(log w, z)  >=  0,

with equality for Lebesgue measure only (Jensen).  The per-n profile
quantities are the scale-localized versions at z = (1 - delta/n) xi0:

    K_n = sup over delta in (0,1) of the entropy,
    P_n = inf over delta in (0,1) of the Poisson extension,
    F_n = Fejer mean of order n - 1 at xi0,

approximated on a log-spaced delta grid.

Resolution guard
----------------
Grid quadrature of the Poisson kernel is only trustworthy while the kernel
is wider than the grid spacing: N * (1 - |z|) must stay above a few units,
or the nearest sample dominates the sum and both extensions degrade
together (the entropy then comes out violently negative).  Profile extrema
therefore ignore delta values that put z closer to the boundary than the
grid resolves; the public ``entropy`` keeps its strict nonnegativity
assertion and is meant for resolved points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .errors import EntropyNegative, OutOfRange
from .measure import (
    CircleMeasure,
    _as_boundary,
    _check_interior,
    fejer_mean,
    poisson,
    poisson_log_weight,
)

# Entropy values this far below zero are attributed to cancellation between
# the two quadratures and clipped; anything lower is a genuine failure.
_ENTROPY_ROUNDOFF = 1e-10

# Minimum kernel width in grid units, N * (1 - |z|), for a Poisson quadrature
# to count as resolved.  exp(-8) ~ 3e-4 bounds the relative error there.
_MIN_RESOLVED = 8.0

# Profile-internal clip for entropy at barely-resolved points; beyond this
# the value is not quadrature noise.
_PROFILE_ROUNDOFF = 0.05

_DELTA_MIN = 1e-4


def szego_interior(mu: CircleMeasure, z: complex) -> complex:
    """Outer function D(z) at an interior point, via the Schwarz kernel.

    D(z) = exp( (1/2) * mean over grid of (xi + z)/(xi - z) * log w(xi) ).
    Atoms do not contribute.  D(0) is real positive.
    """
    mu.require_szego()
    z = _check_interior(z)
    xi = mu.boundary_points
    schwarz = (xi + z) / (xi - z)
    return complex(np.exp(0.5 * np.mean(schwarz * np.log(mu.weight))))


def szego_boundary(mu: CircleMeasure) -> np.ndarray:
    """Nontangential boundary values of D on the grid, via FFT conjugation."""
    mu.require_szego()
    return outer_boundary(mu.weight)


def harmonic_conjugate(samples: np.ndarray) -> np.ndarray:
    """Grid samples of the conjugate function, mean zero.

    Fourier multiplier -i sign(k), with the unpaired Nyquist mode dropped
    for even grids.
    """
    samples = np.asarray(samples, dtype=float)
    n = len(samples)
    s_hat = np.fft.fft(samples)
    k = np.fft.fftfreq(n, d=1.0 / n)
    multiplier = -1j * np.sign(k)
    if n % 2 == 0:
        multiplier[n // 2] = 0.0
    return np.fft.ifft(multiplier * s_hat).real


def outer_boundary(weight: np.ndarray) -> np.ndarray:
    """Boundary values of the outer function with modulus squared = weight.

    Writes u = (1/2) log weight and builds its harmonic conjugate v;
    exp(u + i v) then satisfies |D|^2 = weight exactly at every grid point
    and D(0) = exp(mean u) > 0.
    """
    weight = np.asarray(weight, dtype=float)
    u = 0.5 * np.log(weight)
    return np.exp(u + 1j * harmonic_conjugate(u))


def _entropy_raw(mu: CircleMeasure, z: complex) -> float:
    """log P(mu, z) - P(log w, z) with no sign policing (profile internal)."""
    return float(np.log(poisson(mu, z)) - poisson_log_weight(mu, z))


def entropy(mu: CircleMeasure, z: complex) -> float:
    """Pointwise entropy log P(mu, z) - P(log w, z), >= 0 up to roundoff."""
    value = _entropy_raw(mu, z)
    if value < 0.0:
        if value < -_ENTROPY_ROUNDOFF:
            raise EntropyNegative(
                f"entropy {value:.6g} at z = {z!r} below the roundoff floor; "
                "the point may be unresolved by the grid"
            )
        value = 0.0
    return value


@dataclass(frozen=True)
class ProfileRow:
    """Scale-n extension extrema at a boundary point."""

    n: int
    k_n: float
    p_n: float
    f_n: float


@dataclass(frozen=True)
class EntropyProfile:
    """Per-n records of (K_n, P_n, F_n) at xi0, plus the delta grid used."""

    xi0: complex
    rows: Tuple[ProfileRow, ...]
    delta_grid: np.ndarray

    def row(self, n: int) -> ProfileRow:
        for r in self.rows:
            if r.n == n:
                return r
        raise OutOfRange(f"no profile row for n = {n}")


def entropy_profile(
    mu: CircleMeasure,
    xi0: complex,
    n_list: Sequence[int],
    delta_grid_size: int = 64,
) -> EntropyProfile:
    """Approximate (K_n, P_n, F_n) over a log-spaced delta grid.

    For each n, z runs over (1 - delta/n) xi0 with delta in
    [1e-4, 1 - 1e-4]; K_n is the max of the entropy and P_n the min of the
    Poisson extension over the deltas the grid actually resolves
    (N * delta / n >= 8).  Small negative entropy excursions at
    barely-resolved points are clipped to zero.
    """
    mu.require_szego()
    xi0 = _as_boundary(xi0)
    if delta_grid_size < 2:
        raise OutOfRange("delta_grid_size must be at least 2")
    deltas = np.geomspace(_DELTA_MIN, 1.0 - _DELTA_MIN, delta_grid_size)
    rows = []
    for n in n_list:
        if n < 1:
            raise OutOfRange(f"profile order n = {n} must be >= 1")
        trusted = deltas / n >= _MIN_RESOLVED / mu.grid_size
        if not trusted.any():
            raise OutOfRange(
                f"no resolved delta for n = {n} at grid_size {mu.grid_size}; "
                "enlarge the grid"
            )
        k_n = -np.inf
        p_n = np.inf
        for d in deltas[trusted]:
            z = (1.0 - d / n) * xi0
            value = _entropy_raw(mu, z)
            if value < -_PROFILE_ROUNDOFF:
                raise EntropyNegative(
                    f"entropy {value:.6g} at resolved z = {z!r}"
                )
            k_n = max(k_n, max(value, 0.0))
            p_n = min(p_n, poisson(mu, z))
        rows.append(ProfileRow(n, float(k_n), float(p_n), fejer_mean(mu, xi0, n)))
    return EntropyProfile(xi0, tuple(rows), deltas)
