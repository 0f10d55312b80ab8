import numpy as np
import pytest

from spinorgp.core.grid import Grid
from spinorgp.core.spinor import (
    LatticeOrbital,
    SpinorField,
    global_phase,
    inner_product,
    normalize,
    populations,
    spin_marginal,
    spinor_norm2,
)
from spinorgp.utils.errors import ConfigurationError, ContractError, StructuralError


def make_field(seed=0, points=16):
    grid = Grid.cube(1, points, 4.0)
    rng = np.random.default_rng(seed)
    u = rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)
    v = rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)
    return normalize(SpinorField(grid, u, v))


def test_grid_rejects_bad_sizes():
    with pytest.raises(ConfigurationError):
        Grid(1, 12, (1.0,))
    with pytest.raises(ConfigurationError):
        Grid(4, 8, (1.0,))
    with pytest.raises(ConfigurationError):
        Grid.cube(2, 8, -1.0)


def test_grid_geometry():
    grid = Grid.cube(2, 8, (4.0, 2.0))
    assert grid.shape == (8, 8)
    assert grid.positions.shape == (8, 8, 2)
    assert np.isclose(grid.cell_volume, 0.5 * 0.25)
    assert np.isclose(grid.cell_volume * grid.n_points, grid.volume)
    assert grid.k_squared.shape == grid.shape


def test_normalize_and_populations():
    f = make_field()
    assert np.isclose(spinor_norm2(f), 1.0, atol=1e-14)
    up, down = populations(f)
    assert np.isclose(up + down, 1.0, atol=1e-14)


def test_inner_product_is_conjugate_symmetric():
    f, g = make_field(1), make_field(2)
    g = SpinorField(f.grid, g.u, g.v)
    assert np.isclose(inner_product(f, g), np.conj(inner_product(g, f)))
    assert np.isclose(inner_product(f, f).real, spinor_norm2(f))


def test_inner_product_rejects_mismatched_grids():
    f = make_field(points=16)
    g = make_field(points=32)
    with pytest.raises(StructuralError):
        inner_product(f, g)


def test_global_phase_keeps_norm_and_marginal():
    f = make_field()
    g = global_phase(f, 1.3)
    assert np.isclose(spinor_norm2(g), spinor_norm2(f))
    assert np.allclose(spin_marginal(g), spin_marginal(f))


def test_spin_marginal_is_hermitian_with_unit_trace():
    m = spin_marginal(make_field(4))
    assert np.allclose(m, m.conj().T)
    assert np.isclose(np.trace(m).real, 1.0)
    assert np.all(np.linalg.eigvalsh(m) > -1e-14)


def test_zero_field_cannot_be_normalized():
    grid = Grid.cube(1, 8, 1.0)
    with pytest.raises(ContractError):
        normalize(SpinorField(grid, np.zeros(8), np.zeros(8)))


def test_shape_mismatch_is_structural():
    grid = Grid.cube(1, 8, 1.0)
    with pytest.raises(StructuralError):
        SpinorField(grid, np.zeros(8), np.zeros(4))


def test_lattice_orbital_mode_order():
    amps = np.arange(6).reshape(3, 2) + 0j
    phi = LatticeOrbital(amps)
    # mode index is 2 * site + spin
    assert phi.vector[2 * 1 + 1] == amps[1, 1]
    assert np.allclose(LatticeOrbital.from_vector(phi.vector).amplitudes, amps)


def test_lattice_orbital_projector():
    phi = LatticeOrbital(np.array([[1.0, 1.0j], [0.5, 0.0]])).normalized()
    p = phi.projector()
    assert np.allclose(p @ p, p)
    assert np.isclose(np.trace(p).real, 1.0)
    assert np.isclose(phi.density().sum(), 1.0)


def test_lattice_orbital_rejects_bad_shape():
    with pytest.raises(StructuralError):
        LatticeOrbital(np.zeros((3, 3)))
