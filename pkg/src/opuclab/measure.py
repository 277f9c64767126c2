"""Probability measures on the unit circle: grid density plus point masses.

A measure is represented as mu = w dm + mu_s where w is sampled on the
uniform angular grid theta_j = 2 pi j / N (density against normalized
Lebesgue measure m, m(T) = 1) and mu_s is a finite list of atoms.  The
representation supports every experiment downstream except singular
continuous parts, which are out of scope.

Quadrature policy
-----------------
All grid integrals use the periodic trapezoid rule (a plain mean over the
equispaced samples), which is spectrally accurate for smooth periodic
integrands.  Atom contributions are always added in closed form and never
smeared onto the grid.  Trigonometric moments of sampled data alias above
N/8, so moment orders beyond that raise :class:`~opuclab.errors.AliasRisk`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from .errors import (
    AliasRisk,
    BoundaryPoint,
    GridMismatch,
    InvalidAtoms,
    NegativeInput,
    NonNormalizable,
    NotOnBoundary,
    NotSzego,
    OutOfRange,
)

# Density samples below this are treated as a failure of log-integrability:
# log w quadrature on samples cannot distinguish a genuinely non-Szego
# density from one that merely dips below roundoff, so the floor is the
# documented proxy for the Szego class.
W_FLOOR = 1e-14

# Interior Poisson evaluation refuses points within this distance of the
# boundary; the kernel grows like 1/distance and quadrature degrades first.
BOUNDARY_EXCLUSION = 1e-12

# Tolerance used to accept a complex number as a boundary point.
_BOUNDARY_TOL = 1e-9

_NORMALIZATION_TOL = 1e-12


def _as_boundary(xi0: complex) -> complex:
    xi0 = complex(xi0)
    if abs(abs(xi0) - 1.0) > _BOUNDARY_TOL:
        raise NotOnBoundary(f"|xi0| = {abs(xi0):.6g}, expected a unimodular point")
    return xi0 / abs(xi0)


@dataclass(frozen=True)
class CircleMeasure:
    """Immutable probability measure w dm + sum of atoms.

    Attributes
    ----------
    grid_size : int
        Number N of equispaced angles theta_j = 2 pi j / N.
    weight : np.ndarray
        N nonnegative density samples w(e^{i theta_j}).
    atoms : tuple of (angle, mass)
        Point masses at pairwise distinct angles in [0, 2 pi).
    """

    grid_size: int
    weight: np.ndarray
    atoms: Tuple[Tuple[float, float], ...] = ()
    _spectrum_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        w = np.asarray(self.weight, dtype=float)
        if w.ndim != 1 or len(w) != self.grid_size:
            raise GridMismatch(
                f"weight has {w.shape} samples, grid_size is {self.grid_size}"
            )
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "weight", w)
        total = self.total_mass
        if abs(total - 1.0) > _NORMALIZATION_TOL:
            raise NonNormalizable(
                f"total mass {total!r} is not 1 (construct via build_measure)"
            )

    # -- derived data ---------------------------------------------------------
    @property
    def angles(self) -> np.ndarray:
        """Grid angles theta_j."""
        return 2.0 * np.pi * np.arange(self.grid_size) / self.grid_size

    @property
    def boundary_points(self) -> np.ndarray:
        """Grid points e^{i theta_j}."""
        return np.exp(1j * self.angles)

    @property
    def atom_points(self) -> np.ndarray:
        return np.exp(1j * np.array([a for a, _ in self.atoms]))

    @property
    def atom_masses(self) -> np.ndarray:
        return np.array([m for _, m in self.atoms])

    @property
    def total_mass(self) -> float:
        return float(self.weight.mean() + sum(m for _, m in self.atoms))

    @property
    def is_szego(self) -> bool:
        """True when every density sample clears the log-integrability floor."""
        return bool(self.weight.min() >= W_FLOOR)

    def require_szego(self) -> None:
        if not self.is_szego:
            raise NotSzego(
                f"density sample below w_floor={W_FLOOR:g}; "
                "Szego-dependent operation refused"
            )

    def _spectrum(self) -> np.ndarray:
        """Cached DFT of the weight samples, scaled so entry k is the grid
        quadrature of w(theta) e^{-ik theta}."""
        spec = self._spectrum_cache.get("fft")
        if spec is None:
            spec = np.fft.fft(self.weight) / self.grid_size
            spec.flags.writeable = False
            self._spectrum_cache["fft"] = spec
        return spec


def build_measure(
    weight_samples: Sequence[float],
    atoms: Sequence[Tuple[float, float]] = (),
    normalize: bool = False,
) -> CircleMeasure:
    """Validate and assemble a :class:`CircleMeasure`.

    With ``normalize`` set, weight and masses are scaled by a common factor
    so the total mass is 1; otherwise the input must already be normalized.
    """
    w = np.asarray(weight_samples, dtype=float)
    if w.ndim != 1 or len(w) == 0:
        raise NonNormalizable("weight_samples must be a nonempty 1-d sequence")
    if np.any(w < 0):
        raise NegativeInput(f"negative density sample (min {w.min():g})")
    atom_list = []
    for angle, mass in atoms:
        angle = float(angle)
        mass = float(mass)
        if mass <= 0:
            raise NegativeInput(f"atom mass {mass!r} must be positive")
        if not (0.0 <= angle < 2.0 * np.pi):
            raise InvalidAtoms(f"atom angle {angle!r} outside [0, 2*pi)")
        atom_list.append((angle, mass))
    if len({a for a, _ in atom_list}) != len(atom_list):
        raise InvalidAtoms("atom angles must be pairwise distinct")

    total = w.mean() + sum(m for _, m in atom_list)
    if total <= 0 or not np.isfinite(total):
        raise NonNormalizable("measure carries no finite positive mass")
    if normalize:
        w = w / total
        atom_list = [(a, m / total) for a, m in atom_list]
    return CircleMeasure(len(w), w, tuple(atom_list))


def lebesgue(grid_size: int = 4096) -> CircleMeasure:
    """Normalized Lebesgue measure on the circle."""
    return CircleMeasure(grid_size, np.ones(grid_size))


def to_json_dict(mu: CircleMeasure, family: str | None = None) -> dict:
    """Plain-JSON form: grid_size, weight samples, atoms, optional label."""
    out = {
        "grid_size": mu.grid_size,
        "weight": [float(v) for v in mu.weight],
        "atoms": [{"angle": a, "mass": m} for a, m in mu.atoms],
    }
    if family is not None:
        out["family"] = family
    return out


def from_json_dict(data: dict) -> CircleMeasure:
    """Rebuild a measure from its JSON form (inverse of to_json_dict)."""
    weight = np.asarray(data["weight"], dtype=float)
    if len(weight) != int(data["grid_size"]):
        raise GridMismatch(
            f"grid_size {data['grid_size']} does not match "
            f"{len(weight)} weight samples"
        )
    atoms = tuple((d["angle"], d["mass"]) for d in data.get("atoms", ()))
    return build_measure(weight, atoms=atoms)


# -----------------------------------------------------------------------------
# Poisson extensions
# -----------------------------------------------------------------------------
def _check_interior(z: complex) -> complex:
    z = complex(z)
    if abs(z) >= 1.0 - BOUNDARY_EXCLUSION:
        raise BoundaryPoint(f"|z| = {abs(z):.12g} too close to the boundary")
    return z


def _poisson_kernel(points: np.ndarray, z: complex) -> np.ndarray:
    """(1 - |z|^2) / |1 - conj(xi) z|^2 at the given unimodular points."""
    return (1.0 - abs(z) ** 2) / np.abs(1.0 - np.conj(points) * z) ** 2


def poisson(mu: CircleMeasure, z: complex) -> float:
    """Harmonic extension P(mu, z) of the measure into the disk."""
    z = _check_interior(z)
    value = float(np.mean(mu.weight * _poisson_kernel(mu.boundary_points, z)))
    if mu.atoms:
        value += float(np.sum(mu.atom_masses * _poisson_kernel(mu.atom_points, z)))
    return value


def poisson_log_weight(mu: CircleMeasure, z: complex) -> float:
    """Harmonic extension P(log w, z) of the log-density.

    Atoms are invisible here: log w only sees the absolutely continuous part.
    """
    mu.require_szego()
    z = _check_interior(z)
    return float(
        np.mean(np.log(mu.weight) * _poisson_kernel(mu.boundary_points, z))
    )


def weighted_poisson(
    mu: CircleMeasure,
    g_samples: Sequence[float],
    z: complex,
    g_atom_values: Sequence[float] | None = None,
) -> float:
    """P(g dmu, z) for nonnegative g given by grid samples plus atom values."""
    z = _check_interior(z)
    g = np.asarray(g_samples, dtype=float)
    if g.shape != mu.weight.shape:
        raise GridMismatch(f"g has shape {g.shape}, grid expects {mu.weight.shape}")
    if np.any(g < 0):
        raise NegativeInput("weighted_poisson requires g >= 0")
    value = float(np.mean(g * mu.weight * _poisson_kernel(mu.boundary_points, z)))
    if mu.atoms:
        if g_atom_values is None:
            raise GridMismatch("measure has atoms; g values at atoms required")
        ga = np.asarray(g_atom_values, dtype=float)
        if ga.shape != (len(mu.atoms),):
            raise GridMismatch(
                f"{len(mu.atoms)} atom values expected, got shape {ga.shape}"
            )
        value += float(
            np.sum(mu.atom_masses * ga * _poisson_kernel(mu.atom_points, z))
        )
    return value


# -----------------------------------------------------------------------------
# Moments and Fejer means
# -----------------------------------------------------------------------------
def max_trusted_moment(mu: CircleMeasure) -> int:
    """Largest moment order the grid can deliver without aliasing risk."""
    return mu.grid_size // 8


def moment(mu: CircleMeasure, k: int) -> complex:
    """Trigonometric moment c_k = integral of conj(xi)^k dmu."""
    if k < 0:
        raise OutOfRange("moment order must be >= 0; use conj for negative k")
    if k > max_trusted_moment(mu):
        raise AliasRisk(
            f"moment order {k} beyond trusted band N/8 = {max_trusted_moment(mu)}; "
            "enlarge grid_size"
        )
    value = complex(mu._spectrum()[k])
    for angle, mass in mu.atoms:
        value += mass * np.exp(-1j * k * angle)
    return value


def fejer_mean(mu: CircleMeasure, xi0: complex, n: int) -> float:
    """Fejer mean of order n-1 at xi0.

    Equals (1/n) * integral |p_{n-1}|^2 dmu for p_{n-1}(z) =
    sum_{k<n} conj(xi0)^k z^k, evaluated through moments as
    sum_{|d|<n} (1 - |d|/n) xi0^d c_d.  Strictly positive for n >= 1.
    """
    xi0 = _as_boundary(xi0)
    if n < 1:
        raise OutOfRange("Fejer mean order requires n >= 1")
    value = 1.0
    for d in range(1, n):
        value += 2.0 * (1.0 - d / n) * (xi0**d * moment(mu, d)).real
    return float(value)


def interval_ratio(mu: CircleMeasure, xi0: complex, eps: float) -> float:
    """Singular-to-Lebesgue mass ratio on the chord window |xi - xi0| < eps.

    Used to certify test points: a vanishing ratio at the tested scales is
    the checkable proxy for the density point hypothesis.
    """
    xi0 = _as_boundary(xi0)
    spacing = 2.0 * np.pi / mu.grid_size
    if eps <= spacing:
        raise OutOfRange(f"eps = {eps:g} must exceed the grid spacing {spacing:g}")
    if not mu.atoms:
        return 0.0
    singular = float(
        np.sum(mu.atom_masses[np.abs(mu.atom_points - xi0) < eps])
    )
    # normalized length of the arc where the chord distance stays below eps
    arc = 2.0 * np.arcsin(min(eps, 2.0) / 2.0) / np.pi
    return singular / arc
