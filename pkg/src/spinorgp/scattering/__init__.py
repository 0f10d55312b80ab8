"""Zero-energy scattering, Gross-Pitaevskii rescaling and the shell construction."""

from spinorgp.scattering.radial import (
    RadialPotential,
    RadialMesh,
    ScatteringSolution,
    scattering_length,
    rescale_potential,
    square_well_length,
)
from spinorgp.scattering.shell import (
    ShellConstruction,
    build_shell,
    g_beta_norms,
    envelope_norms,
    sweep_shell,
    fit_slope,
)

__all__ = [
    "RadialPotential",
    "RadialMesh",
    "ScatteringSolution",
    "scattering_length",
    "rescale_potential",
    "square_well_length",
    "ShellConstruction",
    "build_shell",
    "g_beta_norms",
    "envelope_norms",
    "sweep_shell",
    "fit_slope",
]
