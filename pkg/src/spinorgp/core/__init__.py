"""Grids, spinor fields, matrix potentials and pointwise 2x2 algebra."""

from spinorgp.core.grid import Grid
from spinorgp.core.spinor import (
    SpinorField,
    LatticeOrbital,
    spinor_norm2,
    inner_product,
    populations,
    normalize,
    global_phase,
    spin_marginal,
)
from spinorgp.core.potentials import (
    Component,
    Zero,
    Constant,
    HarmonicTrap,
    RabiCosine,
    RabiSine,
    RabiParams,
    MatrixPotential,
    assemble_S,
)
from spinorgp.core.linalg import matexp_2x2, apply_2x2, hermiticity_defect

__all__ = [
    "Grid",
    "SpinorField",
    "LatticeOrbital",
    "spinor_norm2",
    "inner_product",
    "populations",
    "normalize",
    "global_phase",
    "spin_marginal",
    "Component",
    "Zero",
    "Constant",
    "HarmonicTrap",
    "RabiCosine",
    "RabiSine",
    "RabiParams",
    "MatrixPotential",
    "assemble_S",
    "matexp_2x2",
    "apply_2x2",
    "hermiticity_defect",
]
