"""Orthonormal polynomials on the circle from their parameter sequence.

The transfer matrix is the single source of truth for conventions: with
rho_n = sqrt(1 - |a_n|^2),

    (phi_{n+1}, phi*_{n+1}) = rho_n^{-1} (z phi_n - conj(a_n) phi*_n,
                                          phi*_n - a_n z phi_n),

starting from (1, 1).  The monic recursions, the two parameter-extraction
routes, and the CMV/Christoffel-Darboux formulas here are all written to
reproduce it, and their mutual agreement is a tested invariant.

Extraction routes
-----------------
* ``verblunsky_from_moments`` runs the monic recursion on Taylor
  coefficients with inner products read from the moment sequence.  Fine for
  tame measures; coefficient growth makes it ill-conditioned when the
  parameters do not decay.
* ``verblunsky_from_measure`` runs the same recursion on grid *values* of
  the density part (where huge polynomial values are multiplied by tiny
  weights instead of cancelling symbolically), then accounts for each atom
  exactly through the rank-one kernel update of the orthogonal family.
  Extended-precision intermediates throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import NotOnBoundary, OutOfRange, PositivityLoss
from .measure import CircleMeasure, _as_boundary
from .schur import ESCAPE_THRESHOLD, SchurParameters
from .szego import szego_boundary

# Transfer products accumulate in extended precision beyond this order.
_DOUBLE_ORDER_LIMIT = 128

# Monic tables hold O(n^2) coefficients; desk-scale cap.
N_MAX = 512

# Near-diagonal switch for the Christoffel-Darboux quotients.
_CD_DIAGONAL = 1e-8


@dataclass(frozen=True)
class PolynomialPair:
    """Values (phi_n(z), phi_n*(z)) at one point."""

    n: int
    phi: complex
    phi_star: complex
    z: complex


@dataclass(frozen=True)
class MonicTable:
    """Monic polynomial workspace from the moment recursion.

    ``norms_sq[n]`` is the squared L^2(mu) norm of the degree-n monic
    polynomial, read off as the inner product of its reflection with 1.
    """

    phi_rows: Tuple[np.ndarray, ...]
    phi_star_rows: Tuple[np.ndarray, ...]
    norms_sq: np.ndarray
    params: SchurParameters


def _work_dtype(n_max: int, requested=None):
    if requested is not None:
        return requested
    return np.clongdouble if n_max > _DOUBLE_ORDER_LIMIT else np.complex128


# -----------------------------------------------------------------------------
# Transfer-matrix evaluation
# -----------------------------------------------------------------------------
def _run_transfer(params: SchurParameters, zs: np.ndarray, n_max: int, keep_all: bool):
    """Apply n_max transfer steps over an array of points.

    Returns (phi, phi_star) as (n_max+1, len(zs)) tables when keep_all,
    else the final row pair.
    """
    if n_max > len(params):
        raise OutOfRange(
            f"n = {n_max} exceeds stored parameter count {len(params)}"
        )
    dtype = _work_dtype(n_max)
    zs = np.asarray(zs, dtype=dtype)
    a = params.values.astype(dtype)
    rho = np.sqrt(1.0 - np.abs(a) ** 2).astype(dtype)
    phi = np.ones_like(zs)
    phis = np.ones_like(zs)
    if keep_all:
        tab = np.zeros((n_max + 1, len(zs)), dtype=dtype)
        tabs = np.zeros((n_max + 1, len(zs)), dtype=dtype)
        tab[0] = phi
        tabs[0] = phis
    for k in range(n_max):
        zphi = zs * phi
        phi, phis = (zphi - np.conj(a[k]) * phis) / rho[k], (
            phis - a[k] * zphi
        ) / rho[k]
        if keep_all:
            tab[k + 1] = phi
            tabs[k + 1] = phis
    if keep_all:
        return tab.astype(complex), tabs.astype(complex)
    return phi.astype(complex), phis.astype(complex)


def eval_pair(params: SchurParameters, z: complex, n: int) -> PolynomialPair:
    """(phi_n(z), phi_n*(z)) by n transfer-matrix applications."""
    phi, phis = _run_transfer(params, np.array([complex(z)]), n, keep_all=False)
    return PolynomialPair(n, complex(phi[0]), complex(phis[0]), complex(z))


def eval_table(params: SchurParameters, z: complex, n_max: int):
    """All orders 0..n_max at one point; returns (phi, phi_star) arrays."""
    tab, tabs = _run_transfer(params, np.array([complex(z)]), n_max, keep_all=True)
    return tab[:, 0], tabs[:, 0]


def eval_grid_table(params: SchurParameters, zs: np.ndarray, n_max: int):
    """All orders 0..n_max over an array of points; (n_max+1, len) tables."""
    return _run_transfer(params, zs, n_max, keep_all=True)


def eval_grid_pair(params: SchurParameters, zs: np.ndarray, n: int):
    """Order-n values over an array of points, O(len) memory."""
    return _run_transfer(params, zs, n, keep_all=False)


# -----------------------------------------------------------------------------
# CMV basis
# -----------------------------------------------------------------------------
def _chi_from_tables(tab, tabs, xi_col):
    """CMV values chi_0..chi_{n_max} from polynomial tables on |xi| = 1.

    chi_{2k} = conj(xi)^k phi*_{2k}, chi_{2k+1} = conj(xi)^k phi_{2k+1}.
    """
    n_rows = tab.shape[0]
    ks = np.arange(n_rows) // 2
    pref = np.conj(xi_col)[None, :] ** ks[:, None]
    out = np.where(
        (np.arange(n_rows) % 2 == 0)[:, None], tabs, tab
    )
    return pref * out


def chi(params: SchurParameters, xi: complex, n: int) -> complex:
    """CMV basis value chi_n(xi) on the boundary."""
    xi = _as_boundary(xi)
    pair = eval_pair(params, xi, n)
    k = n // 2
    pref = np.conj(xi) ** k
    return complex(pref * (pair.phi_star if n % 2 == 0 else pair.phi))


def chi_table(params: SchurParameters, xi: complex, n_max: int) -> np.ndarray:
    """chi_0(xi) .. chi_{n_max}(xi) at one boundary point."""
    xi = _as_boundary(xi)
    tab, tabs = eval_grid_table(params, np.array([xi]), n_max)
    return _chi_from_tables(tab, tabs, np.array([xi]))[:, 0]


def chi_grid_table(params: SchurParameters, xis: np.ndarray, n_max: int) -> np.ndarray:
    """CMV table over an array of boundary points; shape (n_max+1, len)."""
    xis = np.asarray(xis, dtype=complex)
    tab, tabs = eval_grid_table(params, xis, n_max)
    return _chi_from_tables(tab, tabs, xis)


# -----------------------------------------------------------------------------
# Christoffel-Darboux kernels
# -----------------------------------------------------------------------------
def cd_kernel_sum(params: SchurParameters, xi: complex, z: complex, n: int) -> complex:
    """Direct reproducing-kernel sum over polynomial orders 0..n."""
    pxi, _ = eval_table(params, xi, n)
    pz, _ = eval_table(params, z, n)
    return complex(np.sum(np.conj(pxi) * pz))


def cd_kernel_poly(params: SchurParameters, xi: complex, z: complex, n: int) -> complex:
    """Polynomial-space kernel sum_{k<=n} conj(phi_k(xi)) phi_k(z).

    Evaluated through the two-term quotient

        (phi*_{n+1}(z) conj(phi*_{n+1}(xi)) - phi_{n+1}(z) conj(phi_{n+1}(xi)))
        / (1 - conj(xi) z),

    falling back to direct summation when the denominator degenerates.
    """
    xi = complex(xi)
    z = complex(z)
    den = 1.0 - np.conj(xi) * z
    if abs(den) < _CD_DIAGONAL:
        return cd_kernel_sum(params, xi, z, n)
    px = eval_pair(params, xi, n + 1)
    pz = eval_pair(params, z, n + 1)
    num = pz.phi_star * np.conj(px.phi_star) - pz.phi * np.conj(px.phi)
    return complex(num / den)


def cd_kernel_cmv(params: SchurParameters, xi: complex, z: complex, n: int) -> complex:
    """Laurent-space kernel sum_{k<=n} conj(chi_k(xi)) chi_k(z), |xi|=|z|=1.

    Two-term form with a parity split:

        n even: (z conj(chi_{n+1}(z) xi) chi_{n+1}(xi)
                 - chi_{n+1}(z) conj(chi_{n+1}(xi))) / (1 - conj(xi) z)
        n odd:  (z chi_{n+1}(z) conj(xi chi_{n+1}(xi))
                 - z conj(chi_{n+1}(z) xi) chi_{n+1}(xi)) / (1 - conj(xi) z)

    and equals (xi conj(z))^floor(n/2) times the polynomial kernel there.
    """
    xi = _as_boundary(xi)
    z = _as_boundary(z)
    den = 1.0 - np.conj(xi) * z
    if abs(den) < _CD_DIAGONAL:
        cx = chi_table(params, xi, n)
        cz = cx if z == xi else chi_table(params, z, n)
        return complex(np.sum(np.conj(cx) * cz))
    cx = chi(params, xi, n + 1)
    cz = chi(params, z, n + 1)
    if n % 2 == 0:
        num = z * np.conj(cz * xi) * cx - cz * np.conj(cx)
    else:
        num = z * cz * np.conj(xi * cx) - z * np.conj(cz * xi) * cx
    return complex(num / den)


# -----------------------------------------------------------------------------
# Dual family and polynomial inequalities
# -----------------------------------------------------------------------------
def dual_parameters(params: SchurParameters) -> SchurParameters:
    """Parameters of the dual measure (Schur function negated): {-a_n}."""
    return SchurParameters(-params.values)


def mate_nevai_lower(
    params: SchurParameters, xi: complex, r: float, n: int
) -> tuple[float, float]:
    """Radial lower bound for the zero-free polynomial phi_n*.

    Returns (|phi_n*(r xi)|, ((1+r)/2)^n |phi_n*(xi)|); the first dominates
    the second because all zeros of phi_n* lie outside the open disk.
    """
    xi = _as_boundary(xi)
    if not 0.0 <= r <= 1.0:
        raise OutOfRange(f"radius r = {r!r} outside [0, 1]")
    inner = eval_pair(params, r * xi, n)
    outer = eval_pair(params, xi, n)
    return abs(inner.phi_star), ((1.0 + r) / 2.0) ** n * abs(outer.phi_star)


def phi_star_l2_residual(mu: CircleMeasure, params: SchurParameters, n: int) -> float:
    """Quadrature of |phi_n* - 1/D|^2 w over the grid (Szego convergence)."""
    mu.require_szego()
    _, phis = eval_grid_pair(params, mu.boundary_points, n)
    inv_d = 1.0 / szego_boundary(mu)
    return float(np.mean(np.abs(phis - inv_d) ** 2 * mu.weight))


def weight_from_parameters(params: SchurParameters, grid_size: int) -> np.ndarray:
    """Density grid of the measure with parameters (a_0..a_{K-1}, 0, 0, ...).

    Such a truncation has the rational density 1/|phi_K|^2; sampling it is
    the reconstruction route for parameter-first families.
    """
    angles = 2.0 * np.pi * np.arange(grid_size) / grid_size
    phi, _ = eval_grid_pair(params, np.exp(1j * angles), len(params))
    return 1.0 / np.abs(phi) ** 2


# -----------------------------------------------------------------------------
# Parameter extraction, route A: moment coefficients
# -----------------------------------------------------------------------------
def monic_from_moments(moments: np.ndarray, n_max: int) -> MonicTable:
    """Monic recursion on Taylor coefficients with moment inner products.

    <z^j, z^k> = c_{k-j} with c_{-k} = conj(c_k); the parameter is read from
    conj(a_n) = <z Phi_n, 1> / <Phi_n*, 1>, and <Phi_n*, 1> doubles as the
    running squared norm.
    """
    # Worked in extended precision: the recursion loses a digit per few
    # steps on slowly decaying parameters, and the series route it is
    # checked against escalates to exact arithmetic, so the gap between
    # the two is set by the roundoff here.
    c = np.asarray(moments, dtype=np.clongdouble)
    if n_max > N_MAX:
        raise OutOfRange(f"n_max = {n_max} beyond the table cap {N_MAX}")
    if len(c) < n_max + 1:
        raise OutOfRange(
            f"{len(c)} moments cannot support n_max = {n_max} (need n_max + 1)"
        )
    cbar = np.conj(c)
    phi = np.array([1.0 + 0j], dtype=np.clongdouble)
    phis = np.array([1.0 + 0j], dtype=np.clongdouble)
    phi_rows = [phi]
    phis_rows = [phis]
    norms = np.zeros(n_max + 1)
    a_out = np.zeros(n_max, dtype=complex)
    for n in range(n_max + 1):
        den = np.dot(phis, cbar[: n + 1])
        if den.real <= 0.0 or abs(den.imag) > 1e-8 * max(den.real, 1.0):
            raise PositivityLoss(
                f"norm inner product {den!r} at degree {n}; "
                "moment sequence is not positive definite"
            )
        norms[n] = den.real
        if n == n_max:
            break
        num = np.dot(phi, cbar[1 : n + 2])
        conj_a = num / den
        a = np.conj(conj_a)
        if abs(a) >= ESCAPE_THRESHOLD:
            raise PositivityLoss(
                f"|a_{n}| = {abs(a):.15g} at the escape threshold; "
                "input appears finitely supported"
            )
        a_out[n] = a
        shifted = np.concatenate([[0.0], phi])
        phi = shifted - conj_a * np.concatenate([phis, [0.0]])
        phis = np.concatenate([phis, [0.0]]) - a * shifted
        phi_rows.append(phi)
        phis_rows.append(phis)
    return MonicTable(
        tuple(row.astype(complex) for row in phi_rows),
        tuple(row.astype(complex) for row in phis_rows),
        norms,
        SchurParameters(a_out),
    )


def verblunsky_from_moments(moments: np.ndarray, n_max: int) -> SchurParameters:
    """a_0..a_{n_max-1} from the moment-coefficient recursion."""
    return monic_from_moments(moments, n_max).params


# -----------------------------------------------------------------------------
# Parameter extraction, route A': grid values plus exact atoms
# -----------------------------------------------------------------------------
def _insert_mass(a_values: np.ndarray, m: float, xi0: complex) -> np.ndarray:
    """Parameters after adding mass m (relative to a unit-mass base) at xi0.

    The perturbed monic polynomial evaluates at zero through the base
    family's reproducing kernel:

        Phi'_{n+1}(0) = Phi_{n+1}(0)
            - m Phi_{n+1}(xi0) K_n(0, xi0) / (1 + m K_n(xi0, xi0)),

    with K_n(z, xi) = sum_{k<=n} phi_k(z) conj(phi_k(xi)) and
    a'_n = -conj(Phi'_{n+1}(0)).  All base evaluations at xi0 follow the
    dominant transfer direction, so the update is forward stable.
    """
    n_p = len(a_values)
    params = SchurParameters(a_values.astype(complex))
    dtype = np.clongdouble
    zs = np.array([0.0, xi0], dtype=dtype)
    a = params.values.astype(dtype)
    rho = np.sqrt(1.0 - np.abs(a) ** 2).astype(dtype)
    phi = np.ones_like(zs)
    phis = np.ones_like(zs)
    m = np.clongdouble(m)

    norm = np.ones(n_p + 1, dtype=np.longdouble)
    for k in range(n_p):
        norm[k + 1] = norm[k] * rho[k].real

    out = np.zeros(n_p, dtype=complex)
    k_xx = np.clongdouble(0.0)
    k_0x = np.clongdouble(0.0)
    for n in range(n_p):
        k_xx += np.abs(phi[1]) ** 2
        k_0x += phi[0] * np.conj(phi[1])
        zphi = zs * phi
        phi, phis = (zphi - np.conj(a[n]) * phis) / rho[n], (
            phis - a[n] * zphi
        ) / rho[n]
        phi0_new = norm[n + 1] * (phi[0] - m * phi[1] * k_0x / (1.0 + m * k_xx))
        out[n] = -np.conj(complex(phi0_new))
    return out


def verblunsky_from_measure(mu: CircleMeasure, n_max: int) -> SchurParameters:
    """a_0..a_{n_max-1} by the value-space recursion plus exact atom updates.

    The density part runs the monic recursion on grid values, where the
    huge polynomial values over low-weight regions are damped by the weight
    instead of cancelling in coefficient space.  Atoms are then folded in
    one at a time through the rank-one kernel update, each relative to the
    mass accumulated so far.
    """
    if n_max > N_MAX:
        raise OutOfRange(f"n_max = {n_max} beyond the table cap {N_MAX}")
    w = mu.weight.astype(np.longdouble)
    xi = mu.boundary_points.astype(np.clongdouble)
    phi = np.ones_like(xi)
    phis = np.ones_like(xi)
    values = np.zeros(n_max, dtype=complex)
    for n in range(n_max):
        zphi = xi * phi
        num = np.mean(zphi * w)
        den = np.mean(phis * w)
        if abs(den) < 1e-300:
            raise PositivityLoss(f"vanishing norm inner product at degree {n}")
        a = np.conj(num / den)
        if abs(a) >= ESCAPE_THRESHOLD:
            raise PositivityLoss(
                f"|a_{n}| = {abs(complex(a)):.15g} at the escape threshold; "
                "grid measure appears degenerate at this depth"
            )
        values[n] = complex(a)
        phi, phis = zphi - np.conj(a) * phis, phis - a * zphi

    mass = float(mu.weight.mean())
    for angle, atom_mass in mu.atoms:
        values = _insert_mass(values, atom_mass / mass, np.exp(1j * angle))
        mass += atom_mass
    return SchurParameters(values)
