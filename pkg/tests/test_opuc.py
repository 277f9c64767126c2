"""Transfer-matrix evaluation, moment recursion, CD kernels, dual parameters."""

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from opuclab.errors import OutOfRange, PositivityLoss
from opuclab.measure import build_measure, moment
from opuclab.opuc import (
    cd_kernel_cmv,
    cd_kernel_poly,
    cd_kernel_sum,
    chi,
    chi_table,
    dual_parameters,
    eval_pair,
    eval_table,
    monic_from_moments,
    verblunsky_from_measure,
    verblunsky_from_moments,
    weight_from_parameters,
)
from opuclab.schur import SchurParameters, schur_parameters_from_measure

from oracles import cd_kernel_bruteforce, gram_schmidt_verblunsky


def test_first_polynomial_closed_form(bs_half):
    # phi_1(z) = (z - 1/2)/sqrt(3/4); at z = 1 that is 1/sqrt(3)
    pair = eval_pair(bs_half.params, 1.0 + 0j, 1)
    assert abs(pair.phi - 0.5773502691896258) < 1e-12
    assert abs(pair.phi_star - 0.5773502691896258) < 1e-12


def test_eval_table_matches_pairwise(bs_half):
    z = 0.3 - 0.6j
    phi, phis = eval_table(bs_half.params, z, 12)
    for n in range(13):
        pair = eval_pair(bs_half.params, z, n)
        assert abs(phi[n] - pair.phi) < 1e-12
        assert abs(phis[n] - pair.phi_star) < 1e-12


def test_moment_recursion_against_gram_schmidt(bs_half):
    # dense orthogonalization of the monomials is the independent route
    oracle = gram_schmidt_verblunsky(bs_half.measure, 24)
    assert abs(oracle[0] - 0.5) < 1e-10
    assert np.max(np.abs(oracle - bs_half.params.values[:24])) < 1e-8


def test_gram_schmidt_agrees_on_atomic_measure(mixed_atom):
    oracle = gram_schmidt_verblunsky(mixed_atom.measure, 24)
    assert np.max(np.abs(oracle - mixed_atom.params.values[:24])) < 1e-8


def test_norm_telescoping(bs_half):
    d = 32
    moms = np.array([moment(bs_half.measure, k) for k in range(d + 1)])
    table = monic_from_moments(moms, d)
    assert abs(table.norms_sq[1] / table.norms_sq[0] - 0.75) < 1e-12
    ratios = table.norms_sq[1:] / table.norms_sq[:-1]
    target = 1.0 - np.abs(table.params.values) ** 2
    assert np.max(np.abs(ratios - target) / target) < 1e-10


def test_monic_rejects_indefinite_moments():
    bad = np.array([1.0, 2.0, 0.0])  # |c_1| > c_0 cannot come from a measure
    with pytest.raises(PositivityLoss):
        monic_from_moments(bad, 2)


def test_monic_needs_enough_moments():
    with pytest.raises(OutOfRange):
        monic_from_moments(np.array([1.0, 0.1]), 4)


def test_extraction_routes_agree(all_families):
    for inst in all_families:
        d = 24
        cascade = schur_parameters_from_measure(inst.measure, d).values
        moms = np.array([moment(inst.measure, k) for k in range(d + 1)])
        levinson = verblunsky_from_moments(moms, d).values
        assert np.max(np.abs(cascade - levinson)) < 1e-9, inst.name


def test_atom_insertion_route(mixed_atom):
    direct = verblunsky_from_measure(mixed_atom.measure, 24)
    cascade = schur_parameters_from_measure(mixed_atom.measure, 24)
    assert np.max(np.abs(direct.values - cascade.values)) < 1e-9


def test_dual_parameters_negate_and_involute(bs_half):
    dual = dual_parameters(bs_half.params)
    assert np.array_equal(dual.values, -bs_half.params.values)
    again = dual_parameters(dual)
    assert np.array_equal(again.values, bs_half.params.values)


def test_cd_kernel_routes_interior(geronimus6):
    # quotient form against the brute-force sum at interior points
    for xi, z, n in ((0.5 + 0.1j, 0.3, 5), (0.7j, -0.4, 9)):
        direct = cd_kernel_bruteforce(geronimus6.params, xi, z, n)
        assert abs(cd_kernel_sum(geronimus6.params, xi, z, n) - direct) < 1e-9
        assert abs(cd_kernel_poly(geronimus6.params, xi, z, n) - direct) < 1e-8


def test_cd_kernel_routes_boundary(mixed_atom):
    rng = np.random.default_rng(5)
    for _ in range(10):
        t1, t2 = rng.uniform(0.0, 2.0 * np.pi, 2)
        xi = complex(np.exp(1j * t1))
        z = complex(np.exp(1j * t2))
        if abs(1.0 - np.conj(xi) * z) < 0.1:
            continue
        n = int(rng.integers(1, 24))
        direct = cd_kernel_sum(mixed_atom.params, xi, z, n)
        quotient = cd_kernel_poly(mixed_atom.params, xi, z, n)
        laurent = cd_kernel_cmv(mixed_atom.params, xi, z, n)
        prefactor = (xi * np.conj(z)) ** (n // 2)
        scale = max(1.0, abs(direct))
        assert abs(direct - quotient) / scale < 1e-9
        assert abs(prefactor * direct - laurent) / scale < 1e-9


def test_cmv_basis_interleaves_polynomials(bs_half):
    xi = complex(np.exp(0.9j))
    values = chi_table(bs_half.params, xi, 9)
    for j in range(10):
        assert abs(chi(bs_half.params, xi, j) - values[j]) < 1e-12
    # chi_0 is the constant 1; chi_1 is phi_1
    assert abs(values[0] - 1.0) < 1e-12
    assert abs(values[1] - eval_pair(bs_half.params, xi, 1).phi) < 1e-12


def test_weight_reconstruction_matches_density(bs_half):
    w = weight_from_parameters(bs_half.params.truncated(8), 512)
    angles = 2.0 * np.pi * np.arange(512) / 512
    target = np.array([bs_half.density_at(t) for t in angles])
    assert np.max(np.abs(w - target)) < 1e-10


def test_phi_star_nonvanishing_inside(geronimus6):
    rng = np.random.default_rng(11)
    for _ in range(20):
        z = rng.uniform(0, 0.99) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        _, phis = eval_table(geronimus6.params, complex(z), 24)
        assert np.min(np.abs(phis)) > 1e-8


@settings(max_examples=25, deadline=None)
@given(
    values=st.lists(
        st.complex_numbers(max_magnitude=0.6, allow_nan=False, allow_infinity=False),
        min_size=1,
        max_size=5,
    )
)
def test_parameters_roundtrip_through_weight(values):
    params = SchurParameters(np.array(values, dtype=complex))
    w = weight_from_parameters(params, 4096)
    # the roundtrip contract assumes the grid resolves the density; some
    # draws put polynomial zeros close enough to the circle that even a
    # fine grid aliases, and those are out of scope rather than failures
    tail = np.max(np.abs(np.fft.rfft(w)[-8:])) / len(w)
    assume(tail < 1e-12)
    mu = build_measure(w, normalize=True)
    back = schur_parameters_from_measure(mu, len(values))
    assert np.max(np.abs(back.values - params.values)) < 1e-6
