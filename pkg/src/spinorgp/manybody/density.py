"""One-body reduced density matrices and trace-norm distances."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from spinorgp.core.spinor import LatticeOrbital
from spinorgp.manybody.basis import SymmetricBasis, annihilation, build_mode_basis
from spinorgp.manybody.states import ManyBodyState
from spinorgp.utils.errors import ContractError

MATRIX_TOLERANCE = 1e-12


@dataclass
class OneBodyDensityMatrix:
    """gamma^(1) on the 2d-dimensional one-body space (mode order 2*site + spin)."""

    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def occupation_numbers(self) -> np.ndarray:
        """Eigenvalues in decreasing order."""
        return np.sort(np.linalg.eigvalsh(self.matrix))[::-1]

    def condensate_fraction(self) -> float:
        return float(self.occupation_numbers()[0])

    def validate(self, tolerance: float = MATRIX_TOLERANCE) -> None:
        """Raise unless Hermitian, unit-trace and positive within ``tolerance``."""
        if self.hermiticity_defect() > tolerance:
            raise ContractError(f"density matrix not Hermitian (defect {self.hermiticity_defect():.2e})")
        if abs(self.trace() - 1.0) > tolerance:
            raise ContractError(f"density matrix trace {self.trace()!r} differs from 1")
        if self.occupation_numbers()[-1] < -tolerance:
            raise ContractError("density matrix has a negative eigenvalue")

    def spin_marginal(self) -> np.ndarray:
        """Trace over sites: 2x2 spin density matrix."""
        d = self.dimension // 2
        blocks = self.matrix.reshape(d, 2, d, 2)
        return np.einsum("isit->st", blocks)

    def expectation(self, operator: np.ndarray) -> float:
        """Tr(gamma A) for a Hermitian one-body matrix A."""
        return float(np.trace(self.matrix @ operator).real)

    def overlap(self, orbital: LatticeOrbital) -> float:
        """<phi, gamma phi>."""
        phi = orbital.vector
        return float(np.vdot(phi, self.matrix @ phi).real)


def ladder_stack(psi: ManyBodyState, lowered: Optional[SymmetricBasis] = None) -> np.ndarray:
    """Rows a_mode psi for every mode, shape (modes, dim_{N-1})."""
    basis = psi.basis
    lowered = lowered or build_mode_basis(basis.n_modes, basis.n_particles - 1)
    return np.stack([
        annihilation(basis, lowered, mode) @ psi.amplitudes for mode in range(basis.n_modes)
    ])


def partial_trace(psi: ManyBodyState) -> OneBodyDensityMatrix:
    """gamma_{b a} = <psi, a^dagger_a a_b psi> / N."""
    psi.require_normalized()
    rows = ladder_stack(psi)
    gamma = rows @ rows.conj().T / psi.n_particles
    gamma = 0.5 * (gamma + gamma.conj().T)
    return OneBodyDensityMatrix(gamma)


@dataclass(frozen=True)
class TraceDistance:
    """Tr|gamma - |phi><phi|| with the two projection bounds."""

    distance: float
    lower: float
    upper: float

    def __float__(self) -> float:
        return self.distance

    @property
    def sandwiched(self) -> bool:
        slack = 1e-12
        return self.lower - slack <= self.distance <= self.upper + slack


def trace_distance(gamma: OneBodyDensityMatrix, orbital: LatticeOrbital) -> TraceDistance:
    """Eigenvalue absolute sum of gamma - |phi><phi|, plus 1 - <phi,gamma phi> and 2 sqrt of it."""
    orbital.require_normalized()
    diff = gamma.matrix - orbital.projector()
    distance = float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T)))))
    deficit = max(0.0, 1.0 - gamma.overlap(orbital))
    return TraceDistance(distance=distance, lower=deficit, upper=2.0 * np.sqrt(deficit))
