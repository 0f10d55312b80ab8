"""Many-body states in the symmetric occupation basis."""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np
from scipy.special import gammaln

from spinorgp.core.spinor import LatticeOrbital
from spinorgp.manybody.basis import SymmetricBasis, annihilation, build_mode_basis
from spinorgp.utils.errors import ContractError, StructuralError

NORM_TOLERANCE = 1e-12

OrbitalLike = Union[LatticeOrbital, np.ndarray]


def _orbital_vector(orbital: OrbitalLike) -> np.ndarray:
    if isinstance(orbital, LatticeOrbital):
        return orbital.vector
    return np.asarray(orbital, dtype=complex).reshape(-1)


@dataclass
class ManyBodyState:
    """Amplitude vector over a symmetric basis."""

    basis: SymmetricBasis
    amplitudes: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (self.basis.dimension,):
            raise StructuralError(
                f"amplitudes of shape {self.amplitudes.shape} do not match basis dimension {self.basis.dimension}"
            )
        if self.normalized and abs(self.norm() - 1.0) > NORM_TOLERANCE:
            raise ContractError(f"state flagged normalized has norm {self.norm()!r}")

    @property
    def n_particles(self) -> int:
        return self.basis.n_particles

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def require_normalized(self, tolerance: float = 1e-10) -> None:
        if abs(self.norm() - 1.0) > tolerance:
            raise ContractError(f"many-body state must be normalized, norm = {self.norm():.3e}")

    def with_amplitudes(self, amplitudes: np.ndarray) -> "ManyBodyState":
        return ManyBodyState(self.basis, amplitudes)

    def vdot(self, other: "ManyBodyState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def product_state(basis: SymmetricBasis, orbital: OrbitalLike) -> ManyBodyState:
    """
    phi^{(x)N} in occupation form.

    Amplitude of occupation n: sqrt(N! / prod n_a!) * prod phi_a^{n_a}.
    """
    phi = _orbital_vector(orbital)
    if phi.shape != (basis.n_modes,):
        raise StructuralError(f"orbital of length {phi.size} does not match {basis.n_modes} modes")
    norm2 = float(np.vdot(phi, phi).real)
    if abs(norm2 - 1.0) > NORM_TOLERANCE:
        raise ContractError(f"orbital must be normalized, norm^2 = {norm2:.3e}")

    occ = basis.occupations
    log_multinomial = gammaln(basis.n_particles + 1) - np.sum(gammaln(occ + 1), axis=1)
    amplitudes = np.exp(0.5 * log_multinomial) * np.prod(np.power(phi[None, :], occ), axis=1)
    return ManyBodyState(basis, amplitudes)


def create(state: ManyBodyState, target: SymmetricBasis, orbital: OrbitalLike) -> ManyBodyState:
    """Apply a^dagger(chi) = sum_a chi_a a^dagger_a, mapping N - 1 particles to N."""
    chi = _orbital_vector(orbital)
    out = np.zeros(target.dimension, dtype=complex)
    for mode in np.nonzero(chi)[0]:
        out += chi[mode] * (annihilation(target, state.basis, int(mode)).T @ state.amplitudes)
    return ManyBodyState(target, out)


def fock_state(orbitals: Sequence[OrbitalLike], cap: Optional[int] = None) -> ManyBodyState:
    """
    Normalized symmetrization of a product of one-body orbitals.

    ``fock_state([phi, chi])`` with orthonormal phi, chi is
    (|phi chi> + |chi phi>) / sqrt(2).
    """
    vectors: List[np.ndarray] = [_orbital_vector(o) for o in orbitals]
    if not vectors:
        raise StructuralError("fock_state needs at least one orbital")
    n_modes = vectors[0].size
    current = ManyBodyState(build_mode_basis(n_modes, 0), np.ones(1, dtype=complex))
    for count, vec in enumerate(vectors, start=1):
        target = build_mode_basis(n_modes, count, cap)
        current = create(current, target, vec)
    norm = current.norm()
    if norm == 0.0:
        raise ContractError("orbitals produce the zero state")
    return ManyBodyState(current.basis, current.amplitudes / norm, normalized=True)


def random_state(basis: SymmetricBasis, rng: np.random.Generator) -> ManyBodyState:
    """Haar-like random normalized state."""
    raw = rng.standard_normal(basis.dimension) + 1j * rng.standard_normal(basis.dimension)
    return ManyBodyState(basis, raw / np.linalg.norm(raw), normalized=True)


def random_orbital(sites: int, rng: np.random.Generator) -> LatticeOrbital:
    raw = rng.standard_normal((sites, 2)) + 1j * rng.standard_normal((sites, 2))
    return LatticeOrbital(raw / np.linalg.norm(raw))
