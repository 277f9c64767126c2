"""Cesaro rate bounds, CMV Bessel sums, and recovery deviations."""

import numpy as np
import pytest

from opuclab.asymptotics import (
    CSV_HEADER,
    cd_at_zero_residual,
    cesaro_phi_sq,
    cmv_coefficients,
    mnt_sandwich,
    sandwich_table,
    strong_cesaro_deviation,
    summability_condition,
    szego_recovery_deviation,
)
from opuclab.errors import OutOfRange


def _cos_samples(mu):
    angles = 2.0 * np.pi * np.arange(mu.grid_size) / mu.grid_size
    grid = np.cos(angles).astype(complex)
    atoms = np.array([np.cos(a) for a, _ in mu.atoms], dtype=complex)
    return grid, atoms


def test_cesaro_exact_partial_bernstein_szego(bs_half):
    # a_0 = 1/2, a_n = 0 afterwards gives |phi_k(1)|^2 = 1/3 for k >= 1,
    # so the running mean is (1 + (n - 1)/3)/n exactly
    for n in (1, 4, 16, 64, 256):
        got = cesaro_phi_sq(bs_half.params, 1.0, n)
        want = (1.0 + (n - 1) / 3.0) / n
        assert abs(got - want) < 1e-10, n
    with pytest.raises(OutOfRange):
        cesaro_phi_sq(bs_half.params, 1.0, 0)


def test_sandwich_rows_bound_the_mean(bs_half, leb):
    for inst in (bs_half, leb):
        table = sandwich_table(
            inst.measure, inst.params, 1.0, (4, 16, 64, 256),
            family_label=inst.name,
        )
        for row in table.rows:
            assert row.cesaro >= row.lower - 1e-12, (inst.name, row.n)
            if row.hypothesis_met:
                assert row.cesaro <= row.upper + 1e-12, (inst.name, row.n)
        assert table.to_csv().splitlines()[0] == CSV_HEADER


def test_sandwich_lower_bound_every_family(all_families):
    # the lower rail 1/F_n needs no smallness hypothesis at all
    for inst in all_families:
        xi0 = complex(np.exp(1j * inst.test_angles[0]))
        for n in (4, 32):
            row = mnt_sandwich(inst.measure, inst.params, xi0, n)
            assert row.cesaro >= row.lower - 1e-12, inst.name
            assert abs(row.lower * row.f_n - 1.0) < 1e-12


def test_sandwich_target_is_reciprocal_density(bs_half):
    row = mnt_sandwich(bs_half.measure, bs_half.params, 1.0, 16)
    assert abs(row.target - 1.0 / 3.0) < 1e-12
    assert abs(row.cesaro - (1.0 + 15.0 / 3.0) / 16.0) < 1e-10


def test_strong_cesaro_constant_function_is_exact(leb, bs_half):
    for inst in (leb, bs_half):
        mu = inst.measure
        ones = np.ones(mu.grid_size, dtype=complex)
        atom_ones = np.ones(len(mu.atoms), dtype=complex)
        dev = strong_cesaro_deviation(
            mu, inst.params, ones, 1.0, 1.0, 64, f_atom_values=atom_ones
        )
        assert dev < 1e-12, inst.name


def test_strong_cesaro_decreases_for_smooth_data(leb, bs_half):
    for inst in (leb, bs_half):
        mu = inst.measure
        grid, atoms = _cos_samples(mu)
        devs = [
            strong_cesaro_deviation(
                mu, inst.params, grid, 1.0, 1.0, n, f_atom_values=atoms
            )
            for n in (32, 64, 128, 256)
        ]
        assert all(b < a for a, b in zip(devs, devs[1:])), (inst.name, devs)
        assert devs[-1] <= devs[0] / 3.0, inst.name


def test_cmv_bessel_inequality(mixed_atom):
    mu = mixed_atom.measure
    grid, atoms = _cos_samples(mu)
    coeffs = cmv_coefficients(mu, mixed_atom.params, grid, 128, atoms)
    angles = 2.0 * np.pi * np.arange(mu.grid_size) / mu.grid_size
    norm_sq = float(np.mean(mu.weight * np.cos(angles) ** 2))
    norm_sq += sum(m * np.cos(a) ** 2 for a, m in mu.atoms)
    assert float(np.sum(np.abs(coeffs) ** 2)) <= norm_sq + 1e-10
    # c_0 is the plain integral of f and c_1 pairs against phi_1
    want0 = float(np.mean(mu.weight * np.cos(angles))) + sum(
        m * np.cos(a) for a, m in mu.atoms
    )
    assert abs(coeffs[0] - want0) < 1e-12


def test_summability_condition_pair(bs_half):
    for n in (8, 64, 256):
        lhs, rhs_unit = summability_condition(
            bs_half.measure, bs_half.params, 1.0, n
        )
        assert lhs > 0.0 and rhs_unit > 0.0
        assert lhs / rhs_unit < 10.0, n


def test_szego_recovery_deviation_bernstein_szego(bs_half):
    # phi_k* D is exactly 1 from k = 1 on once the single parameter passes
    for n in (2, 8, 64):
        dev = szego_recovery_deviation(
            bs_half.measure, bs_half.params, 1.0, n
        )
        assert dev < 1e-10, n


def test_szego_recovery_deviation_decreases(ell2_half):
    xi = complex(np.exp(1j * ell2_half.test_angles[1]))
    devs = [
        szego_recovery_deviation(ell2_half.measure, ell2_half.params, xi, n)
        for n in (32, 64, 128, 256)
    ]
    assert all(b < a for a, b in zip(devs, devs[1:])), devs


def test_cd_at_zero_residual(bs_half, geronimus6):
    for inst in (bs_half, geronimus6):
        for xi in (1.0, np.exp(1.7j)):
            assert cd_at_zero_residual(inst.params, complex(xi), 24) < 1e-9


def test_sandwich_metadata_records_the_setup(bs_half):
    table = sandwich_table(
        bs_half.measure, bs_half.params, 1.0, (4, 16), family_label="bs"
    )
    assert table.metadata["family"] == "bs"
    assert table.metadata["xi0_angle"] == 0.0
    assert table.metadata["grid_size"] == bs_half.measure.grid_size
    assert len(table.rows) == 2
