import numpy as np
import pytest
import scipy.linalg as la

from spinorgp.core.potentials import MatrixPotential, RabiParams
from spinorgp.manybody.basis import build_basis
from spinorgp.manybody.density import partial_trace
from spinorgp.manybody.hamiltonian import HamiltonianAssembler, assemble_hamiltonian, energy_per_particle
from spinorgp.manybody.model import LatticeModel
from spinorgp.manybody.propagate import lanczos_expm, propagate
from spinorgp.manybody.states import product_state, random_orbital
from spinorgp.utils.errors import ConfigurationError, StructuralError


def make_model(pair=(1.0, 0.5), drive=True, sites=3, mode="mean-field"):
    potential = MatrixPotential.rabi(RabiParams.resonant(1.0, 2.0)) if drive else MatrixPotential()
    return LatticeModel(sites, 1.0, np.asarray(pair), potential, mode)


def test_hamiltonian_is_hermitian():
    model = make_model()
    h = assemble_hamiltonian(model, build_basis(3, 3), 0.3).toarray()
    assert np.allclose(h, h.conj().T, atol=1e-13)


def test_assembler_rejects_mismatched_basis():
    with pytest.raises(StructuralError):
        HamiltonianAssembler(make_model(sites=3), build_basis(2, 2))


def test_lanczos_matches_dense_exponential():
    rng = np.random.default_rng(2)
    raw = rng.standard_normal((30, 30)) + 1j * rng.standard_normal((30, 30))
    h = 0.5 * (raw + raw.conj().T)
    v = rng.standard_normal(30) + 0j
    out, err = lanczos_expm(h, v, 0.1)
    assert np.allclose(out, la.expm(-0.1j * h) @ v, atol=1e-10)
    assert err < 1e-10


def test_propagation_conserves_norm():
    rng = np.random.default_rng(1)
    model = make_model()
    psi = product_state(build_basis(3, 3), random_orbital(3, rng))
    out = propagate(psi, model, 0.0, 1.0, 0.05)
    assert abs(out.norm() - 1.0) < 1e-10


def test_free_evolution_stays_a_product_state():
    rng = np.random.default_rng(9)
    model = make_model(pair=(0.0,), drive=False)
    phi = random_orbital(3, rng)
    psi = propagate(product_state(build_basis(3, 3), phi), model, 0.0, 0.8, 0.1)

    evolved = la.expm(-0.8j * model.onebody_matrix(0.0)) @ phi.vector
    gamma = partial_trace(psi)
    assert np.allclose(gamma.matrix, np.outer(evolved, evolved.conj()), atol=1e-9)


def test_callback_sees_every_step():
    rng = np.random.default_rng(0)
    psi = product_state(build_basis(2, 2), random_orbital(2, rng))
    times = []
    propagate(psi, make_model(sites=2), 0.0, 0.3, 0.1, callback=lambda t, s: times.append(t))
    assert len(times) == 3
    assert abs(times[-1] - 0.3) < 1e-12


def test_propagation_argument_checks():
    rng = np.random.default_rng(0)
    psi = product_state(build_basis(2, 2), random_orbital(2, rng))
    model = make_model(sites=2)
    with pytest.raises(ConfigurationError):
        propagate(psi, model, 0.0, 1.0, 0.0)
    with pytest.raises(ConfigurationError):
        propagate(psi, model, 1.0, 0.0, 0.1)
    assert propagate(psi, model, 0.5, 0.5, 0.1) is psi


def test_energy_of_free_product_state():
    rng = np.random.default_rng(6)
    model = make_model(pair=(0.0,), drive=False)
    phi = random_orbital(3, rng)
    psi = product_state(build_basis(3, 2), phi)
    h1 = model.onebody_matrix(0.0)
    expected = np.vdot(phi.vector, h1 @ phi.vector).real
    assert abs(energy_per_particle(psi, model, 0.0) - expected) < 1e-12


def test_uniform_pair_energy_in_mean_field_mode():
    # all particles on one mode: E/N = 2 * hopping + g / 2
    model = make_model(pair=(2.0,), drive=False, sites=2)
    phi = np.zeros(4, dtype=complex)
    phi[0] = 1.0
    psi = product_state(build_basis(2, 4), phi)
    assert abs(energy_per_particle(psi, model, 0.0) - (2.0 * model.hopping + 1.0)) < 1e-12


def test_energy_is_conserved_without_drive():
    rng = np.random.default_rng(8)
    model = make_model(drive=False)
    psi = product_state(build_basis(3, 3), random_orbital(3, rng))
    assembler = HamiltonianAssembler(model, psi.basis)
    e0 = energy_per_particle(psi, model, 0.0, assembler)
    e1 = energy_per_particle(propagate(psi, model, 0.0, 1.0, 0.1, assembler=assembler), model, 1.0, assembler)
    assert abs(e1 - e0) < 1e-9
