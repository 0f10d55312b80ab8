"""
Condensate projections p, q and the excitation-number projections P_k.

P_k projects onto states with exactly N - k particles in the condensate
orbital phi. It is realized in second quantization: a Householder
reflection H maps phi to (a phase times) the first mode, its Fock lift
Gamma(H) = exp(i pi dGamma(|w><w|)) rotates the many-body state, and in the
rotated frame P_k is a mask on the occupation of mode 0. H is Hermitian and
unitary, so Gamma(H) is its own inverse and the same rotation takes the
state back.
"""

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from spinorgp.core.spinor import LatticeOrbital
from spinorgp.manybody.basis import SymmetricBasis, one_body_operator
from spinorgp.manybody.states import ManyBodyState
from spinorgp.utils.errors import ContractError, StructuralError

PROJECTION_TOLERANCE = 1e-12


def householder(phi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Return (H, w_hat) with H = 1 - 2 w_hat w_hat^dagger and H phi = -e^{i arg phi_0} e_0.

    ``phi`` must be a unit vector.
    """
    phi = np.asarray(phi, dtype=complex)
    e0 = np.zeros_like(phi)
    e0[0] = 1.0
    phase = np.exp(1j * np.angle(phi[0])) if phi[0] != 0 else 1.0
    w = phi + phase * e0
    w_hat = w / np.linalg.norm(w)
    return np.eye(phi.size, dtype=complex) - 2.0 * np.outer(w_hat, w_hat.conj()), w_hat


@dataclass(eq=False)
class CondensateProjector:
    """
    p = |phi><phi| and q = 1 - p for a normalized lattice orbital, lifted to N bosons.

    The Fock rotation is generated once per particle number and reused; the
    projector can act on bases with any particle count over the same modes.
    """

    orbital: LatticeOrbital
    n_particles: int
    _generators: Dict[int, sp.csr_matrix] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.orbital.require_normalized(PROJECTION_TOLERANCE)
        if self.n_particles < 1:
            raise StructuralError("projector needs at least one particle")
        self.reflection, self._w_hat = householder(self.orbital.vector)

    @property
    def n_modes(self) -> int:
        return self.orbital.vector.size

    @property
    def p(self) -> np.ndarray:
        return self.orbital.projector()

    @property
    def q(self) -> np.ndarray:
        return np.eye(self.n_modes, dtype=complex) - self.p

    def _check_basis(self, basis: SymmetricBasis) -> None:
        if basis.n_modes != self.n_modes:
            raise StructuralError(f"basis has {basis.n_modes} modes, orbital has {self.n_modes}")

    def _generator(self, basis: SymmetricBasis) -> sp.csr_matrix:
        key = basis.n_particles
        if key not in self._generators:
            number = one_body_operator(basis, np.outer(self._w_hat, self._w_hat.conj()))
            self._generators[key] = (1j * np.pi * number).tocsr()
        return self._generators[key]

    def rotate(self, amplitudes: np.ndarray, basis: SymmetricBasis) -> np.ndarray:
        """Gamma(H) applied to a vector or to the columns of a matrix over ``basis``."""
        self._check_basis(basis)
        if basis.n_particles == 0:
            return np.asarray(amplitudes, dtype=complex).copy()
        return expm_multiply(self._generator(basis), np.asarray(amplitudes, dtype=complex))

    def excitations(self, basis: SymmetricBasis) -> np.ndarray:
        """Particles outside the condensate, per basis state of the rotated frame."""
        return basis.n_particles - basis.occupations[:, 0]

    def apply_diagonal(self, amplitudes: np.ndarray, basis: SymmetricBasis, coefficients: np.ndarray) -> np.ndarray:
        """sum_k c_k P_k on amplitudes over ``basis``; ``coefficients`` indexed by k = 0..N."""
        coefficients = np.asarray(coefficients)
        if coefficients.shape[0] != basis.n_particles + 1:
            raise StructuralError(f"need {basis.n_particles + 1} coefficients, got {coefficients.shape[0]}")
        rotated = self.rotate(amplitudes, basis)
        weights = coefficients[self.excitations(basis)]
        if rotated.ndim == 2:
            weights = weights[:, None]
        return self.rotate(weights * rotated, basis)

    def sector_weights(self, psi: ManyBodyState) -> np.ndarray:
        """||P_k psi||^2 for k = 0..N."""
        rotated = self.rotate(psi.amplitudes, psi.basis)
        return np.bincount(
            self.excitations(psi.basis),
            weights=np.abs(rotated) ** 2,
            minlength=psi.n_particles + 1,
        )

    def apply_pk(self, psi: ManyBodyState, k: int) -> ManyBodyState:
        self._check_basis(psi.basis)
        n = psi.n_particles
        if not 0 <= k <= n:
            return psi.with_amplitudes(np.zeros_like(psi.amplitudes))
        mask = np.zeros(n + 1)
        mask[k] = 1.0
        return psi.with_amplitudes(self.apply_diagonal(psi.amplitudes, psi.basis, mask))

    def q_count(self, psi: ManyBodyState) -> float:
        """<psi, sum_j q_j psi> = N - <psi, a^dagger(phi) a(phi) psi>."""
        weights = self.sector_weights(psi)
        return float(np.arange(weights.size) @ weights)


def apply_pk(psi: ManyBodyState, proj: CondensateProjector, k: int) -> ManyBodyState:
    """P_k psi; the zero state for k outside 0..N."""
    if proj.n_particles != psi.n_particles:
        raise ContractError(f"projector built for N = {proj.n_particles}, state has N = {psi.n_particles}")
    return proj.apply_pk(psi, k)
