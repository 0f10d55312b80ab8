"""Exact N-boson dynamics with two internal levels on a small ring."""

from spinorgp.manybody.basis import SymmetricBasis, build_basis, one_body_operator, annihilation
from spinorgp.manybody.model import LatticeModel
from spinorgp.manybody.states import (
    ManyBodyState,
    product_state,
    fock_state,
    random_state,
    random_orbital,
)
from spinorgp.manybody.hamiltonian import (
    HamiltonianAssembler,
    assemble_hamiltonian,
    energy_per_particle,
)
from spinorgp.manybody.propagate import propagate, lanczos_expm
from spinorgp.manybody.density import (
    OneBodyDensityMatrix,
    TraceDistance,
    partial_trace,
    trace_distance,
)

__all__ = [
    "SymmetricBasis",
    "build_basis",
    "one_body_operator",
    "annihilation",
    "LatticeModel",
    "ManyBodyState",
    "product_state",
    "fock_state",
    "random_state",
    "random_orbital",
    "HamiltonianAssembler",
    "assemble_hamiltonian",
    "energy_per_particle",
    "propagate",
    "lanczos_expm",
    "OneBodyDensityMatrix",
    "TraceDistance",
    "partial_trace",
    "trace_distance",
]
