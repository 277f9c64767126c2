"""Cesaro-limit harnesses: density recovery, rate sandwich, CMV summability.

The central diagnostic is the Cesaro mean of squared polynomial values,

    (1/n) sum_{k<n} |phi_k(xi0)|^2  ->  1 / w(xi0)

at points where the measure looks like its density.  The sandwich bounds it
for every finite n by scale-localized extension extrema,

    1/F_n  <=  (1/n) sum_{k<n} |phi_k(xi0)|^2  <=  1/P_n + 64 K_n^{1/4}/P_n,

where the upper half needs the entropy hypothesis K_n <= 1 and the lower
half is a pure variational fact (the normalized Fejer polynomial competes
in the Christoffel minimum) and needs nothing.  Rows of the sweep serialize
to CSV with a fixed header for downstream tooling.

The CMV half: Fourier coefficients against the chi basis, partial-sum
strong Cesaro deviation at a point, the per-n boundedness condition that
drives it, and the Cesaro recovery of 1/D by reflected polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from .errors import GridMismatch, OutOfRange
from .measure import CircleMeasure, _as_boundary, poisson
from .opuc import chi_grid_table, chi_table, eval_table
from .schur import SchurParameters
from .szego import entropy_profile, szego_boundary

# Rate-bound constant multiplying K_n^{1/4} in the sandwich upper half.
SANDWICH_RATE_CONSTANT = 64.0

CSV_HEADER = "n,cesaro,target,lower,upper,K_n,P_n,F_n"


def cesaro_phi_sq(params: SchurParameters, xi0: complex, n: int) -> float:
    """(1/n) sum_{k<n} |phi_k(xi0)|^2, streamed through the transfer steps."""
    xi0 = _as_boundary(xi0)
    if n < 1:
        raise OutOfRange("Cesaro order requires n >= 1")
    phi, _ = eval_table(params, xi0, n - 1)
    return float(np.mean(np.abs(phi) ** 2))


@dataclass(frozen=True)
class SandwichRow:
    """One n of the rate-bound sweep at a fixed boundary point."""

    n: int
    cesaro: float
    target: float
    lower: float
    upper: float
    k_n: float
    p_n: float
    f_n: float

    @property
    def hypothesis_met(self) -> bool:
        """The upper half is only backed by theory when K_n <= 1."""
        return self.k_n <= 1.0

    def to_csv_line(self) -> str:
        cells = [str(self.n)] + [
            format(float(v), ".12g")
            for v in (
                self.cesaro,
                self.target,
                self.lower,
                self.upper,
                self.k_n,
                self.p_n,
                self.f_n,
            )
        ]
        return ",".join(cells)


@dataclass(frozen=True)
class ConvergenceTable:
    """Sandwich rows over an n sweep plus reproducibility metadata."""

    rows: Tuple[SandwichRow, ...]
    metadata: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        lines.extend(row.to_csv_line() for row in self.rows)
        return "\n".join(lines) + "\n"


def _grid_density_at(mu: CircleMeasure, xi0: complex) -> float:
    angle = float(np.angle(xi0)) % (2.0 * np.pi)
    j = int(round(angle * mu.grid_size / (2.0 * np.pi))) % mu.grid_size
    return float(mu.weight[j])


def mnt_sandwich(
    mu: CircleMeasure,
    params: SchurParameters,
    xi0: complex,
    n: int,
    delta_grid_size: int = 64,
) -> SandwichRow:
    """One sandwich row: Cesaro mean against 1/F_n and 1/P_n + 64 K_n^(1/4)/P_n.

    The target column records 1/w at the nearest grid sample, a diagnostic
    only; nothing is asserted against it.
    """
    xi0 = _as_boundary(xi0)
    profile = entropy_profile(mu, xi0, [n], delta_grid_size)
    prow = profile.rows[0]
    cesaro = cesaro_phi_sq(params, xi0, n)
    upper = (
        1.0 + SANDWICH_RATE_CONSTANT * prow.k_n ** 0.25
    ) / prow.p_n
    return SandwichRow(
        n=n,
        cesaro=cesaro,
        target=1.0 / max(_grid_density_at(mu, xi0), 1e-300),
        lower=1.0 / prow.f_n,
        upper=upper,
        k_n=prow.k_n,
        p_n=prow.p_n,
        f_n=prow.f_n,
    )


def sandwich_table(
    mu: CircleMeasure,
    params: SchurParameters,
    xi0: complex,
    n_list: Sequence[int],
    delta_grid_size: int = 64,
    family_label: str = "",
) -> ConvergenceTable:
    """Sandwich rows for every n in the sweep, with metadata recorded."""
    xi0 = _as_boundary(xi0)
    rows = tuple(
        mnt_sandwich(mu, params, xi0, n, delta_grid_size) for n in n_list
    )
    metadata = {
        "xi0_angle": float(np.angle(xi0)) % (2.0 * np.pi),
        "family": family_label,
        "grid_size": mu.grid_size,
        "delta_grid": [1e-4, 1.0 - 1e-4, delta_grid_size],
    }
    return ConvergenceTable(rows, metadata)


# -----------------------------------------------------------------------------
# CMV Fourier analysis
# -----------------------------------------------------------------------------
def cmv_coefficients(
    mu: CircleMeasure,
    params: SchurParameters,
    f_samples: np.ndarray,
    n_max: int,
    f_atom_values: np.ndarray | None = None,
) -> np.ndarray:
    """Fourier coefficients c_j = integral of f conj(chi_j) dmu, j <= n_max."""
    f = np.asarray(f_samples, dtype=complex)
    if f.shape != mu.weight.shape:
        raise GridMismatch(f"f has shape {f.shape}, grid expects {mu.weight.shape}")
    table = chi_grid_table(params, mu.boundary_points, n_max)
    coeffs = (np.conj(table) @ (f * mu.weight)) / mu.grid_size
    if mu.atoms:
        if f_atom_values is None:
            raise GridMismatch("measure has atoms; f values at atoms required")
        fa = np.asarray(f_atom_values, dtype=complex)
        if fa.shape != (len(mu.atoms),):
            raise GridMismatch(
                f"{len(mu.atoms)} atom values expected, got shape {fa.shape}"
            )
        for (angle, mass), f_val in zip(mu.atoms, fa):
            coeffs += mass * f_val * np.conj(
                chi_table(params, np.exp(1j * angle), n_max)
            )
    return coeffs


def strong_cesaro_deviation(
    mu: CircleMeasure,
    params: SchurParameters,
    f_samples: np.ndarray,
    xi0: complex,
    f_at_xi0: complex,
    n: int,
    f_atom_values: np.ndarray | None = None,
) -> float:
    """(1/n) sum_{k<n} |S_k(f, xi0) - f(xi0)| for CMV partial sums S_k."""
    xi0 = _as_boundary(xi0)
    if n < 1:
        raise OutOfRange("deviation order requires n >= 1")
    coeffs = cmv_coefficients(mu, params, f_samples, n - 1, f_atom_values)
    chi_vals = chi_table(params, xi0, n - 1)
    partial = np.cumsum(coeffs * chi_vals)
    return float(np.mean(np.abs(partial - complex(f_at_xi0))))


def summability_condition(
    mu: CircleMeasure, params: SchurParameters, xi0: complex, n: int
) -> tuple[float, float]:
    """Per-n boundedness pair behind strong Cesaro summability.

    Returns lhs = (1/n) sum_{k<=n} |chi_k(xi0)|^2 and
    rhs_unit = 1/P(mu, (1 - 1/n) xi0); the empirical constant for a sweep
    is the sup of lhs/rhs_unit over the tested n.
    """
    xi0 = _as_boundary(xi0)
    if n < 1:
        raise OutOfRange("condition order requires n >= 1")
    chi_vals = chi_table(params, xi0, n)
    lhs = float(np.sum(np.abs(chi_vals) ** 2) / n)
    z_n = (1.0 - 1.0 / n) * xi0
    return lhs, 1.0 / poisson(mu, z_n)


# -----------------------------------------------------------------------------
# Cesaro recovery of the inverse outer function
# -----------------------------------------------------------------------------
def szego_recovery_deviation(
    mu: CircleMeasure, params: SchurParameters, xi: complex, n: int
) -> float:
    """(1/n) sum over 1 <= k <= n of |phi_k*(xi) D(xi) - 1|^2 at a grid node.

    The product tends to 1 in Cesaro mean for Szego measures; the boundary
    outer values live on the grid, so xi snaps to its closest node.  The
    k = 0 term is skipped: phi_0* = 1 carries no recursion information and
    D(xi) - 1 alone would pollute the mean.
    """
    mu.require_szego()
    xi = _as_boundary(xi)
    if n < 1:
        raise OutOfRange("deviation order requires n >= 1")
    angle = float(np.angle(xi)) % (2.0 * np.pi)
    j = int(round(angle * mu.grid_size / (2.0 * np.pi))) % mu.grid_size
    node = mu.boundary_points[j]
    d_val = szego_boundary(mu)[j]
    _, phis = eval_table(params, node, n)
    return float(np.mean(np.abs(phis[1:] * d_val - 1.0) ** 2))


def cd_at_zero_residual(params: SchurParameters, xi: complex, n: int) -> float:
    """Worst mismatch of the kernel-at-zero identity for k = 1..n.

    Checks sum_{j<k} conj(phi_j(0)) phi_j(xi) against its two-term form
    phi_k*(xi) conj(phi_k*(0)) - phi_k(xi) conj(phi_k(0)).
    """
    if n < 1:
        raise OutOfRange("identity check requires n >= 1")
    phi_x, phis_x = eval_table(params, xi, n)
    phi_0, phis_0 = eval_table(params, 0.0, n)
    direct = np.cumsum(np.conj(phi_0[:n]) * phi_x[:n])
    two_term = phis_x[1:] * np.conj(phis_0[1:]) - phi_x[1:] * np.conj(phi_0[1:])
    return float(np.max(np.abs(two_term - direct)))
