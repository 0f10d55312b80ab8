import numpy as np
import pytest

from spinorgp.core.potentials import MatrixPotential, RabiParams
from spinorgp.core.spinor import LatticeOrbital
from spinorgp.dynamics.lattice import LatticeEffectiveEquation, lattice_energy
from spinorgp.manybody.model import LatticeModel
from spinorgp.utils.errors import ConfigurationError


def make_model(pair=(1.0,), drive=True, sites=4):
    potential = MatrixPotential.rabi(RabiParams.resonant(1.0, 2.0)) if drive else MatrixPotential()
    return LatticeModel(sites, 1.0, np.asarray(pair), potential)


def make_orbital(sites=4):
    amps = np.zeros((sites, 2), dtype=complex)
    amps[:, 0] = 1.0 + 0.5 * np.cos(2 * np.pi * np.arange(sites) / sites)
    return LatticeOrbital(amps).normalized()


def test_norm_is_conserved():
    eq = LatticeEffectiveEquation(make_model(), "hartree")
    phi = eq.evolve(make_orbital(), 0.0, 1.0, 0.01)
    assert abs(phi.norm2() - 1.0) < 1e-12


def test_contact_and_hartree_agree_for_onsite_pair():
    model = make_model(pair=(0.7,))
    phi0 = make_orbital()
    a = LatticeEffectiveEquation(model, "contact").evolve(phi0, 0.0, 0.5, 0.01)
    b = LatticeEffectiveEquation(model, "hartree").evolve(phi0, 0.0, 0.5, 0.01)
    assert np.allclose(a.amplitudes, b.amplitudes, atol=1e-13)


def test_contact_label_names_the_coupling():
    model = make_model(pair=(1.0, 0.5, 0.25))
    eq = LatticeEffectiveEquation(model, "contact")
    # separations 0, 1, 1, 2 on a 4-site ring
    assert np.isclose(model.contact_coupling(), 1.0 + 2 * 0.5 + 0.25)
    assert "contact" in eq.label


def test_energy_conserved_without_drive():
    eq = LatticeEffectiveEquation(make_model(drive=False), "hartree")
    phi0 = make_orbital()
    phi1 = eq.evolve(phi0, 0.0, 1.0, 0.002)
    assert abs(eq.energy(phi1, 1.0) - eq.energy(phi0, 0.0)) < 1e-4


def test_step_halving_converges():
    eq = LatticeEffectiveEquation(make_model(), "contact")
    phi0 = make_orbital()
    coarse = eq.evolve(phi0, 0.0, 1.0, 0.02).vector
    medium = eq.evolve(phi0, 0.0, 1.0, 0.01).vector
    fine = eq.evolve(phi0, 0.0, 1.0, 0.005).vector
    ratio = np.linalg.norm(coarse - medium) / np.linalg.norm(medium - fine)
    assert 3.5 < ratio < 4.5


def test_lattice_energy_helper_matches_method():
    model = make_model()
    phi = make_orbital()
    assert np.isclose(lattice_energy(phi, model, 0.3), LatticeEffectiveEquation(model).energy(phi, 0.3))


def test_invalid_arguments():
    with pytest.raises(ConfigurationError):
        LatticeEffectiveEquation(make_model(), "dipolar")
    eq = LatticeEffectiveEquation(make_model())
    with pytest.raises(ConfigurationError):
        eq.evolve(make_orbital(), 1.0, 0.5, 0.01)
