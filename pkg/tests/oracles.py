"""Independent slow-path references the fast implementations are tested against.

Everything here works directly from definitions: dense Gram-Schmidt in
L^2(mu) instead of any recursion, full polynomial multiplication instead
of triangular division, plain quadrature sums instead of kernel algebra.
Agreement between these and the package routines is evidence, not
tautology, because no code is shared beyond the measure container.
"""

from __future__ import annotations

import numpy as np

from opuclab.measure import CircleMeasure


def measure_inner(mu: CircleMeasure, f_grid, f_atoms, g_grid, g_atoms) -> complex:
    """<f, g> in L^2(mu) by direct quadrature plus atom terms."""
    value = complex(np.mean(mu.weight * f_grid * np.conj(g_grid)))
    if mu.atoms:
        value += complex(np.sum(mu.atom_masses * f_atoms * np.conj(g_atoms)))
    return value


def gram_schmidt_verblunsky(mu: CircleMeasure, n_max: int) -> np.ndarray:
    """a_0..a_{n_max-1} from dense Gram-Schmidt on the monomials.

    Orthogonalizes 1, z, z^2, ... against each other with the quadrature
    inner product, tracking coefficient vectors so the free term of each
    monic polynomial is available; the parameter is read from
    a_n = -conj(Phi_{n+1}(0)).  Projections are applied twice per vector
    (classical reorthogonalization) to keep the loss of orthogonality at
    roundoff level.
    """
    pts = mu.boundary_points
    apts = mu.atom_points
    monic_coeffs: list[np.ndarray] = []
    monic_grid: list[np.ndarray] = []
    monic_atoms: list[np.ndarray] = []
    norms_sq: list[float] = []
    for n in range(n_max + 1):
        coeff = np.zeros(n + 1, dtype=complex)
        coeff[n] = 1.0
        grid = pts**n
        atoms = apts**n
        for _ in range(2):
            for m in range(n):
                proj = (
                    measure_inner(mu, grid, atoms, monic_grid[m], monic_atoms[m])
                    / norms_sq[m]
                )
                coeff[: m + 1] -= proj * monic_coeffs[m]
                grid = grid - proj * monic_grid[m]
                atoms = atoms - proj * monic_atoms[m]
        monic_coeffs.append(coeff)
        monic_grid.append(grid)
        monic_atoms.append(atoms)
        norms_sq.append(
            measure_inner(mu, grid, atoms, grid, atoms).real
        )
    return np.array(
        [-np.conj(monic_coeffs[n + 1][0]) for n in range(n_max)]
    )


def poly_long_multiply(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Plain convolution product of two coefficient arrays."""
    out = np.zeros(len(p) + len(q) - 1, dtype=complex)
    for i, pi in enumerate(p):
        out[i : i + len(q)] += pi * np.asarray(q, dtype=complex)
    return out


def poisson_kernel_direct(xi: complex, z: complex) -> float:
    """(1 - |z|^2)/|xi - z|^2 from the definition."""
    return (1.0 - abs(z) ** 2) / abs(xi - z) ** 2


def cd_kernel_bruteforce(params, xi: complex, z: complex, n: int) -> complex:
    """sum_k conj(phi_k(xi)) phi_k(z) with each pair evaluated separately.

    The conjugate sits on the first argument, matching the quotient form's
    denominator 1 - conj(xi) z.
    """
    from opuclab.opuc import eval_pair

    return complex(
        sum(
            np.conj(eval_pair(params, xi, k).phi) * eval_pair(params, z, k).phi
            for k in range(n + 1)
        )
    )
