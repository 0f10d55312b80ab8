import numpy as np
import pytest

from spinorgp.core.spinor import LatticeOrbital
from spinorgp.manybody.basis import build_basis
from spinorgp.manybody.density import OneBodyDensityMatrix, partial_trace, trace_distance
from spinorgp.manybody.states import ManyBodyState, fock_state, product_state, random_orbital, random_state
from spinorgp.utils.errors import ContractError


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_partial_trace_of_random_state_is_a_density_matrix(seed):
    basis = build_basis(3, 3)
    gamma = partial_trace(random_state(basis, np.random.default_rng(seed)))
    assert gamma.dimension == 6
    gamma.validate(1e-12)
    assert 1.0 / 6 - 1e-12 <= gamma.condensate_fraction() <= 1.0 + 1e-12


def test_product_state_gives_rank_one():
    rng = np.random.default_rng(7)
    phi = random_orbital(3, rng)
    gamma = partial_trace(product_state(build_basis(3, 4), phi))
    assert np.allclose(gamma.matrix, phi.projector(), atol=1e-12)
    assert abs(gamma.condensate_fraction() - 1.0) < 1e-12

    td = trace_distance(gamma, phi)
    assert td.distance < 1e-10
    assert td.sandwiched


def test_trace_distance_for_two_orbital_state():
    phi = np.zeros((2, 2), dtype=complex)
    chi = np.zeros((2, 2), dtype=complex)
    phi[0, 0] = 1.0
    chi[1, 0] = 1.0
    phi, chi = LatticeOrbital(phi), LatticeOrbital(chi)
    gamma = partial_trace(fock_state([phi, chi]))

    td = trace_distance(gamma, phi)
    assert abs(td.distance - 1.0) < 1e-12
    assert abs(td.lower - 0.5) < 1e-12
    assert abs(td.upper - 2 * np.sqrt(0.5)) < 1e-12
    assert td.sandwiched
    assert float(td) == td.distance


@pytest.mark.parametrize("seed", [10, 11, 12])
def test_trace_distance_between_projection_bounds(seed):
    rng = np.random.default_rng(seed)
    gamma = partial_trace(random_state(build_basis(2, 3), rng))
    assert trace_distance(gamma, random_orbital(2, rng)).sandwiched


def test_spin_marginal_and_expectation():
    rng = np.random.default_rng(4)
    gamma = partial_trace(random_state(build_basis(2, 2), rng))
    marginal = gamma.spin_marginal()
    assert marginal.shape == (2, 2)
    assert abs(np.trace(marginal).real - 1.0) < 1e-12
    assert abs(gamma.expectation(np.eye(4)) - 1.0) < 1e-12


def test_validate_rejects_bad_matrices():
    with pytest.raises(ContractError):
        OneBodyDensityMatrix(np.array([[1.0, 1.0], [0.0, 0.0]])).validate()
    with pytest.raises(ContractError):
        OneBodyDensityMatrix(np.eye(2)).validate()
    with pytest.raises(ContractError):
        OneBodyDensityMatrix(np.diag([1.5, -0.5])).validate()


def test_partial_trace_requires_normalized_state():
    basis = build_basis(2, 2)
    with pytest.raises(ContractError):
        partial_trace(ManyBodyState(basis, 2 * np.ones(basis.dimension) / np.sqrt(basis.dimension)))
