"""Scattering solutions, the dual measure, and the pairing identities."""

import numpy as np
import pytest

from opuclab.errors import OutOfRange
from opuclab.opuc import dual_parameters
from opuclab.scattering import (
    averaged_jost_deviation,
    dual_weight,
    duality_identity_residual,
    herglotz_boundary,
    jost_recurrence_residual,
    jost_solutions,
)


def test_jost_solutions_satisfy_the_recursion(ell2_half):
    xi = complex(np.exp(1j * ell2_half.test_angles[1]))
    plus, minus = jost_solutions(
        ell2_half.measure, ell2_half.params, xi, 256
    )
    assert plus.side == "+" and minus.side == "-"
    assert jost_recurrence_residual(ell2_half.params, plus) < 1e-8
    assert jost_recurrence_residual(ell2_half.params, minus) < 1e-8


def test_jost_targets():
    xi = complex(np.exp(0.7j))
    from opuclab.scattering import JostSolution

    plus = JostSolution(xi, "+", np.zeros((3, 2), dtype=complex))
    minus = JostSolution(xi, "-", np.zeros((3, 2), dtype=complex))
    assert plus.n_max == 2
    assert np.allclose(plus.target(2), [xi**2, 0.0])
    assert np.allclose(minus.target(2), [0.0, 1.0])


def test_averaged_deviation_decreases(ell2_half):
    xi = complex(np.exp(1j * ell2_half.test_angles[1]))
    plus, _ = jost_solutions(ell2_half.measure, ell2_half.params, xi, 256)
    devs = [averaged_jost_deviation(plus, n) for n in (64, 128, 256)]
    assert all(b < a for a, b in zip(devs, devs[1:])), devs
    with pytest.raises(OutOfRange):
        averaged_jost_deviation(plus, 258)


def test_duality_identity(ell2_half):
    res = duality_identity_residual(
        ell2_half.measure, ell2_half.params, n_check=32
    )
    assert res < 1e-6


def test_dual_of_dual_is_identity(bs_half):
    back = dual_parameters(dual_parameters(bs_half.params))
    assert np.array_equal(back.values, bs_half.params.values)


def test_dual_weight_positive_off_atoms(mixed_atom):
    mu = mixed_atom.measure
    v = dual_weight(mu)
    assert np.all(v >= 0.0)
    assert np.count_nonzero(v) > mu.grid_size - 4


def test_herglotz_real_part_is_the_weight(bs_half):
    mu = bs_half.measure
    f = herglotz_boundary(mu)
    assert np.max(np.abs(f.real - mu.weight)) < 1e-10


def test_lebesgue_jost_solutions_are_free(leb):
    # with no parameters the solutions coincide with their targets
    plus, minus = jost_solutions(leb.measure, leb.params, 1.0, 64)
    for n in (0, 16, 64):
        assert np.allclose(plus.entries[n], plus.target(n), atol=1e-12)
        assert np.allclose(minus.entries[n], minus.target(n), atol=1e-12)
