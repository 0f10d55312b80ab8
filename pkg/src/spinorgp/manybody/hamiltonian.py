"""
Second-quantized lattice Hamiltonian.

H(t) = sum_ab [T (x) 1 + S(t)]_ab a^dagger_a a_b
       + c_N * ( 1/2 sum_{i != j} V(i-j) n_i n_j + 1/2 V(0) sum_i n_i (n_i - 1) )

with n_i the particle number on site i (both spin levels) and c_N = 1 in
Gross-Pitaevskii mode, 1 / (N - 1) in mean-field mode. Hopping couples
equal-spin modes on neighbouring sites, S couples the two levels of one
site and the pair term is diagonal, so each row holds at most
1 + 2 * (modes) * (2 + 1) nonzeros.
"""

from typing import Dict, Optional

import numpy as np
import scipy.sparse as sp

from spinorgp.manybody.basis import SymmetricBasis, one_body_operator
from spinorgp.manybody.model import LatticeModel, require_hermitian_blocks
from spinorgp.manybody.states import ManyBodyState
from spinorgp.utils.errors import StructuralError


def pair_diagonal(model: LatticeModel, basis: SymmetricBasis) -> np.ndarray:
    """Diagonal of the density-density term, including the N-dependent scale."""
    n_site = basis.site_occupations().astype(float)
    v = model.pair_matrix()
    full = 0.5 * np.einsum("ai,ij,aj->a", n_site, v, n_site)
    self_term = 0.5 * model.pair_profile[0] * n_site.sum(axis=1)
    return model.pair_scale(basis.n_particles) * (full - self_term)


class HamiltonianAssembler:
    """Caches the time-independent part and rebuilds the S(t) part on demand."""

    def __init__(self, model: LatticeModel, basis: SymmetricBasis):
        if basis.n_modes != model.modes:
            raise StructuralError(f"basis has {basis.n_modes} modes, model needs {model.modes}")
        self.model = model
        self.basis = basis
        kinetic = np.kron(model.kinetic_matrix(), np.eye(2))
        self._static = (
            one_body_operator(basis, kinetic) + sp.diags(pair_diagonal(model, basis))
        ).tocsr()
        self._cache: Dict[float, sp.csr_matrix] = {}

    @property
    def time_dependent(self) -> bool:
        return self.model.potential.time_dependent

    def onsite_operator(self, blocks: np.ndarray) -> sp.csr_matrix:
        """Second quantization of per-site 2x2 blocks."""
        require_hermitian_blocks(blocks)
        total = sp.csr_matrix((self.basis.dimension, self.basis.dimension), dtype=complex)
        for site in range(self.model.sites):
            for s1 in range(2):
                for s2 in range(2):
                    coeff = blocks[site, s1, s2]
                    if coeff != 0:
                        total = total + coeff * self.basis.hop(2 * site + s1, 2 * site + s2)
        return total.tocsr()

    def at(self, t: float) -> sp.csr_matrix:
        key = 0.0 if not self.time_dependent else float(t)
        if key not in self._cache:
            if len(self._cache) > 4:
                self._cache.clear()
            self._cache[key] = (self._static + self.onsite_operator(self.model.onebody_blocks(key))).tocsr()
        return self._cache[key]

    def derivative(self, t: float) -> sp.csr_matrix:
        """dH/dt = second quantization of dS/dt."""
        return self.onsite_operator(self.model.onebody_derivative_blocks(t))


def assemble_hamiltonian(model: LatticeModel, basis: SymmetricBasis, t: float) -> sp.csr_matrix:
    """Sparse Hermitian H(t) on the symmetric basis."""
    return HamiltonianAssembler(model, basis).at(t)


def energy_per_particle(
    psi: ManyBodyState,
    model: LatticeModel,
    t: float,
    assembler: Optional[HamiltonianAssembler] = None,
) -> float:
    """<psi, H psi> / N."""
    psi.require_normalized()
    h = (assembler or HamiltonianAssembler(model, psi.basis)).at(t)
    value = np.vdot(psi.amplitudes, h @ psi.amplitudes)
    if abs(value.imag) > 1e-12 * max(1.0, abs(value.real)):
        raise StructuralError(f"energy has imaginary residue {value.imag:.2e}")
    return float(value.real / psi.n_particles)
