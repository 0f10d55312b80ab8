import numpy as np
import pytest

from spinorgp.core.grid import Grid
from spinorgp.core.potentials import Constant, HarmonicTrap, MatrixPotential, RabiParams, RabiSine
from spinorgp.core.spinor import SpinorField, normalize, populations, spinor_norm2
from spinorgp.dynamics.gp import (
    GPParams,
    SplitStepSolver,
    evolve,
    final_state,
    gp_energy,
    richardson_ratio,
    strang_step,
)
from spinorgp.dynamics.rabi import population_law, rabi_reference
from spinorgp.utils.errors import ConfigurationError, ContractError, UnsupportedCaseError


def make_gaussian(points=64, length=16.0, width=1.0, down=0.0):
    grid = Grid.cube(1, points, length)
    x = grid.positions[..., 0]
    profile = np.exp(-x ** 2 / (2 * width ** 2))
    return normalize(SpinorField(grid, np.sqrt(1 - down) * profile, np.sqrt(down) * profile))


def make_uniform(points=4, length=10.0):
    grid = Grid.cube(1, points, length)
    u = np.full(grid.shape, 1.0 / np.sqrt(grid.volume), dtype=complex)
    return SpinorField(grid, u, np.zeros_like(u))


def make_trap(drive=False):
    trap = HarmonicTrap(1.0)
    if drive:
        return MatrixPotential.rabi(RabiParams.resonant(1.0, 2.0), trap, trap)
    return MatrixPotential(trap_up=trap, trap_down=trap)


def test_params_validation():
    with pytest.raises(ConfigurationError):
        GPParams(-0.1, MatrixPotential(), 0.1, 1.0)
    with pytest.raises(ConfigurationError):
        GPParams(0.0, MatrixPotential(), 2.0, 1.0)
    with pytest.raises(ConfigurationError):
        GPParams(0.0, MatrixPotential(), 0.3, 1.0).n_steps


def test_stability_guard():
    f0 = make_gaussian()
    params = GPParams(0.0, MatrixPotential(trap_up=Constant(1000.0)), 0.01, 0.1)
    with pytest.raises(ConfigurationError):
        evolve(f0, params)


def test_stability_guard_sees_every_step_midpoint():
    # vanishes at 0, t_end / 2 and t_end but reaches 1000 between them
    spike = MatrixPotential(b2=RabiSine(1000.0, 4 * np.pi / 0.1))
    params = GPParams(0.0, spike, 0.01, 0.1)
    assert len(params.sample_times()) == params.n_steps + 2
    with pytest.raises(ConfigurationError):
        params.check_stability(Grid.cube(1, 8, 1.0))


def test_static_potential_is_sampled_once():
    assert list(GPParams(0.0, make_trap(), 0.01, 0.1).sample_times()) == [0.0]


def test_uniform_drive_step_matches_pointwise_step():
    f0 = make_gaussian(points=16, down=0.2)
    drive = MatrixPotential.rabi(RabiParams.resonant(1.0, 2.0))
    # a zero trap that is not flagged uniform forces the per-point path
    pointwise = MatrixPotential.rabi(RabiParams.resonant(1.0, 2.0), HarmonicTrap(0.0))
    assert drive.spatially_uniform and not pointwise.spatially_uniform
    psi = f0.stacked()
    fast = SplitStepSolver(f0.grid, GPParams(0.05, drive, 0.01, 1.0)).step(psi, 0.3)
    slow = SplitStepSolver(f0.grid, GPParams(0.05, pointwise, 0.01, 1.0)).step(psi, 0.3)
    assert np.allclose(fast, slow, atol=1e-13)


def test_evolve_requires_normalized_seed():
    grid = Grid.cube(1, 8, 1.0)
    f = SpinorField(grid, 2 * np.ones(8), np.zeros(8))
    with pytest.raises(ContractError):
        evolve(f, GPParams(0.0, MatrixPotential(), 0.1, 1.0))


def test_norm_is_conserved():
    f0 = make_gaussian(down=0.3)
    params = GPParams(0.05, make_trap(drive=True), 1e-3, 0.5)
    trajectory = evolve(f0, params, record_every=100)
    norms = [sum(p) for p in trajectory.populations]
    assert max(abs(n - 1.0) for n in norms) < 1e-9
    assert trajectory.times[-1] == pytest.approx(0.5)
    assert len(trajectory.times) == 6


@pytest.mark.slow
def test_norm_drift_over_ten_thousand_steps():
    f0 = make_gaussian(down=0.3)
    params = GPParams(0.05, make_trap(drive=True), 1e-4, 1.0)
    trajectory = evolve(f0, params, record_every=2500)
    assert params.n_steps == 10_000
    norms = [sum(p) for p in trajectory.populations]
    assert max(abs(n - 1.0) for n in norms) < 1e-9


def test_energy_nearly_conserved_for_static_potential():
    f0 = make_gaussian()
    params = GPParams(0.05, make_trap(), 1e-3, 0.2)
    trajectory = evolve(f0, params, record_every=20)
    energies = np.asarray(trajectory.energies)
    assert np.max(np.abs(energies - energies[0])) < 1e-4


def test_free_ground_energy_of_uniform_state():
    f = make_uniform()
    # no gradients and no potential: only the interaction term remains
    a = 0.1
    expected = 4 * np.pi * a / f.grid.volume
    assert np.isclose(gp_energy(f, a, MatrixPotential(), 0.0), expected)


def test_strang_step_keeps_populations_without_drive():
    f0 = make_gaussian(down=0.25)
    f1 = strang_step(f0, GPParams(0.02, make_trap(), 1e-3, 1e-3), 0.0)
    assert np.allclose(populations(f1), populations(f0), atol=1e-13)


def test_rabi_populations_follow_law():
    f0 = make_uniform()
    rabi = RabiParams.resonant(1.0, 2.0)
    params = GPParams(0.0, MatrixPotential.rabi(rabi), 1e-3, 0.5)
    trajectory = evolve(f0, params, record_every=50)
    law = population_law(rabi, trajectory.times)
    assert np.max(np.abs(np.asarray(trajectory.populations) - law)) < 1e-5


def test_rabi_reference_matches_final_field():
    f0 = make_uniform()
    rabi = RabiParams.resonant(1.0, 2.0)
    params = GPParams(0.0, MatrixPotential.rabi(rabi), 1e-3, 0.5)
    final = final_state(f0, params)
    ref = rabi_reference(f0, rabi, 0.5)
    assert np.allclose(final.u, ref.u, atol=1e-5)
    assert np.allclose(final.v, ref.v, atol=1e-5)
    assert np.isclose(spinor_norm2(ref), 1.0)


def test_rabi_reference_guards():
    f0 = make_uniform()
    with pytest.raises(UnsupportedCaseError):
        rabi_reference(f0, RabiParams(1.0, 2.0, 0.3), 0.1)
    mixed = SpinorField(f0.grid, f0.u, f0.u)
    with pytest.raises(ContractError):
        rabi_reference(mixed, RabiParams.resonant(1.0, 2.0), 0.1)


def test_population_law_shape():
    law = population_law(RabiParams.resonant(2.0, 1.0), [0.0, np.pi / 4])
    assert law.shape == (2, 2)
    assert np.allclose(law[1], [0.0, 1.0], atol=1e-15)


def test_richardson_ratio_is_second_order():
    f0 = make_gaussian()
    params = GPParams(0.05, make_trap(), 0.005, 0.25)
    assert 3.6 <= richardson_ratio(f0, params) <= 4.4


def test_trajectory_frame_columns():
    f0 = make_gaussian()
    trajectory = evolve(f0, GPParams(0.0, make_trap(), 0.01, 0.05), record_every=1)
    frame = trajectory.to_frame()
    assert list(frame.columns) == ["t", "E", "pop_up", "pop_down"]
    assert len(frame) == 6
