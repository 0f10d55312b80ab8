import numpy as np
import pytest

from spinorgp.scattering.radial import RadialPotential
from spinorgp.scattering.shell import (
    build_shell,
    envelope_norms,
    fit_slope,
    g_beta_norms,
    sweep_shell,
)
from spinorgp.utils.errors import ConfigurationError


def make_potential():
    return RadialPotential.square_well(2.0, 1.0)


@pytest.fixture(scope="module")
def shell():
    return build_shell(make_potential(), 0.2, 1000)


def test_shell_cancels_scattering_length(shell):
    assert abs(shell.residual_length) < 1e-10
    assert shell.a_n > 0


def test_shell_radii_are_ordered(shell):
    assert shell.rescaled.support_radius < shell.inner_radius < shell.outer_radius
    assert shell.inner_radius == pytest.approx(1000 ** -0.2)


def test_f_beta_is_flat_outside_the_shell(shell):
    r = shell.outer_radius * np.array([1.01, 1.5, 3.0])
    assert np.allclose(shell.f_beta.evaluate(r), 1.0, atol=1e-9)
    assert np.all(shell.g_beta(r) == 0.0)


def test_g_beta_below_envelope(shell):
    r = np.linspace(0.05, 1.0, 40) * shell.outer_radius
    assert np.all(shell.g_beta(r) <= shell.envelope(r) + 1e-12)


def test_norms_below_envelope_norms(shell):
    for g_norm, env_norm in zip(g_beta_norms(shell), envelope_norms(shell)):
        assert 0 < g_norm <= env_norm


def test_lattice_samples_use_nodes(shell):
    samples = shell.lattice_samples(0.1, 4)
    assert samples.shape == (4,)
    assert np.allclose(samples, shell.g_beta(np.arange(4) * 0.1))


def test_invalid_beta_and_overlap():
    with pytest.raises(ConfigurationError):
        build_shell(make_potential(), 1.2, 100)
    # N^-beta inside the rescaled support
    with pytest.raises(ConfigurationError):
        build_shell(RadialPotential.square_well(2.0, 5.0), 0.9, 10)


def test_fit_slope_recovers_power():
    n = np.array([10.0, 100.0, 1000.0])
    assert fit_slope(n, 3.0 * n ** -1.4) == pytest.approx(-1.4)


@pytest.mark.slow
def test_sweep_slopes_match_scaling():
    beta = 0.2
    table, slopes = sweep_shell(make_potential(), beta, [100, 1000, 10000, 100000], threads=2)
    assert list(table["N"]) == [100, 1000, 10000, 100000]
    assert abs(slopes["slope_L1"] - slopes["expected_L1"]) < 0.05
    assert abs(slopes["slope_L32"] - slopes["expected_L32"]) < 0.05
    assert abs(slopes["slope_L2"] - slopes["expected_L2"]) < 0.05
    band = table["R_beta_scaled"].max() / table["R_beta_scaled"].min()
    assert band <= 3.0
