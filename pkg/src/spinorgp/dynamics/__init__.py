"""Coupled Gross-Pitaevskii integration, Rabi reference and the lattice effective equation."""

from spinorgp.dynamics.gp import (
    GPParams,
    GPTrajectory,
    SplitStepSolver,
    strang_step,
    gp_energy,
    evolve,
    final_state,
    richardson_ratio,
)
from spinorgp.dynamics.rabi import rabi_reference, population_law
from spinorgp.dynamics.lattice import LatticeEffectiveEquation, lattice_energy

__all__ = [
    "GPParams",
    "GPTrajectory",
    "SplitStepSolver",
    "strang_step",
    "gp_energy",
    "evolve",
    "final_state",
    "richardson_ratio",
    "rabi_reference",
    "population_law",
    "LatticeEffectiveEquation",
    "lattice_energy",
]
