"""
Two distinguished particles next to a symmetric rest.

An N-boson state psi is embedded as the array

    X[alpha, beta, r] = (a_alpha a_beta psi)_r / sqrt(N (N - 1))

over (slot 1 mode, slot 2 mode, (N-2)-particle occupation state). The
embedding is an isometry; its adjoint symmetrizes back. Operators that act on
particles 1 and 2 only (p_1, q_2, g(x_1 - x_2), a general A_12) act on the
slot axes, counting operators act on all three axes at once. Every operator
here keeps the rest symmetric, so the array stays in the partially symmetric
setting.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
import scipy.sparse as sp

from spinorgp.config.loader import get_config
from spinorgp.counting.operators import CountingOperator, build_m_variants
from spinorgp.counting.projector import CondensateProjector
from spinorgp.counting.weights import WeightFunction
from spinorgp.manybody.basis import SymmetricBasis, annihilation, build_mode_basis
from spinorgp.manybody.model import ring_separations
from spinorgp.manybody.states import ManyBodyState
from spinorgp.utils.errors import SizeError, StructuralError


@dataclass(eq=False)
class TwoSlotSpace:
    """Expanded space for an N-particle basis, N >= 2."""

    basis: SymmetricBasis
    cap: Optional[int] = None
    rest: SymmetricBasis = field(init=False)
    _first: List[sp.csr_matrix] = field(init=False, repr=False)
    _second: List[sp.csr_matrix] = field(init=False, repr=False)

    def __post_init__(self):
        n = self.basis.n_particles
        if n < 2:
            raise StructuralError("two distinguished slots need N >= 2")
        if self.cap is None:
            self.cap = get_config().limits.expansion_cap
        modes = self.basis.n_modes
        middle = build_mode_basis(modes, n - 1, cap=max(self.cap, self.basis.dimension))
        self.rest = build_mode_basis(modes, n - 2, cap=max(self.cap, self.basis.dimension))
        size = modes * modes * self.rest.dimension
        if size > self.cap:
            raise SizeError(
                f"two-slot expansion needs {size} amplitudes, cap is {self.cap}", required=size, cap=self.cap
            )
        self._first = [annihilation(self.basis, middle, mode) for mode in range(modes)]
        self._second = [annihilation(middle, self.rest, mode) for mode in range(modes)]

    @property
    def n_particles(self) -> int:
        return self.basis.n_particles

    @property
    def n_modes(self) -> int:
        return self.basis.n_modes

    @property
    def shape(self):
        return (self.n_modes, self.n_modes, self.rest.dimension)

    @property
    def _scale(self) -> float:
        n = self.n_particles
        return 1.0 / np.sqrt(n * (n - 1))

    def embed(self, psi: ManyBodyState) -> np.ndarray:
        if psi.basis.n_modes != self.n_modes or psi.n_particles != self.n_particles:
            raise StructuralError("state does not live on this space's basis")
        lowered = [a @ psi.amplitudes for a in self._first]
        out = np.empty(self.shape, dtype=complex)
        for alpha, a_alpha in enumerate(self._second):
            for beta in range(self.n_modes):
                out[alpha, beta] = a_alpha @ lowered[beta]
        return self._scale * out

    def project(self, x: np.ndarray) -> ManyBodyState:
        """Adjoint of :meth:`embed`; the symmetric part of ``x`` as an N-particle state."""
        self._check(x)
        out = np.zeros(self.basis.dimension, dtype=complex)
        for beta, a_beta in enumerate(self._first):
            raised = sum(self._second[alpha].T @ x[alpha, beta] for alpha in range(self.n_modes))
            out += a_beta.T @ raised
        return ManyBodyState(self.basis, self._scale * out)

    def _check(self, x: np.ndarray) -> None:
        if x.shape != self.shape:
            raise StructuralError(f"expanded array of shape {x.shape}, expected {self.shape}")

    def random(self, rng: np.random.Generator, slot_symmetric: bool = False) -> np.ndarray:
        """Normalized random array; optionally symmetric under exchange of the two slots."""
        x = rng.standard_normal(self.shape) + 1j * rng.standard_normal(self.shape)
        if slot_symmetric:
            x = x + np.swapaxes(x, 0, 1)
        return x / np.linalg.norm(x)

    # slot operators

    def slot1(self, matrix: np.ndarray, x: np.ndarray) -> np.ndarray:
        return np.einsum("ab,bcr->acr", matrix, x)

    def slot2(self, matrix: np.ndarray, x: np.ndarray) -> np.ndarray:
        return np.einsum("ab,cbr->car", matrix, x)

    def two_body(self, matrix: np.ndarray, x: np.ndarray) -> np.ndarray:
        """A_12 given as an (M^2, M^2) matrix on the slot pair (row index alpha * M + beta)."""
        m = self.n_modes
        if matrix.shape != (m * m, m * m):
            raise StructuralError(f"two-body matrix must be {(m * m, m * m)}, got {matrix.shape}")
        return (matrix @ x.reshape(m * m, -1)).reshape(x.shape)

    def pair_matrix(self, profile: np.ndarray) -> np.ndarray:
        """g(site alpha - site beta) on the (M, M) slot grid from a ring-separation profile."""
        sites = self.n_modes // 2
        profile = np.asarray(profile, dtype=float)
        needed = sites // 2 + 1
        if profile.size < needed:
            profile = np.concatenate([profile, np.zeros(needed - profile.size)])
        per_site = profile[ring_separations(sites)]
        return np.repeat(np.repeat(per_site, 2, axis=0), 2, axis=1)

    def pair(self, profile: np.ndarray, x: np.ndarray) -> np.ndarray:
        """Multiplication by g(x_1 - x_2)."""
        return self.pair_matrix(profile)[:, :, None] * x

    # counting

    def excitations(self, projector: CondensateProjector) -> np.ndarray:
        """Total excitation number per rotated-frame entry, shape (M, M, D_rest)."""
        slot = (np.arange(self.n_modes) != 0).astype(np.int64)
        rest = projector.excitations(self.rest)
        return slot[:, None, None] + slot[None, :, None] + rest[None, None, :]

    def _rotate(self, projector: CondensateProjector, x: np.ndarray) -> np.ndarray:
        h = projector.reflection
        y = np.einsum("ac,bd,cdr->abr", h, h, x)
        m = self.n_modes
        columns = y.reshape(m * m, -1).T
        return projector.rotate(columns, self.rest).T.reshape(x.shape)

    def counting(self, projector: CondensateProjector, coefficients: np.ndarray, x: np.ndarray) -> np.ndarray:
        """sum_k c_k P_k acting on the expanded array."""
        self._check(x)
        coefficients = np.asarray(coefficients)
        if coefficients.shape[0] != self.n_particles + 1:
            raise StructuralError(f"need {self.n_particles + 1} coefficients")
        rotated = self._rotate(projector, x)
        return self._rotate(projector, coefficients[self.excitations(projector)] * rotated)

    def apply(self, op: CountingOperator, x: np.ndarray) -> np.ndarray:
        return self.counting(op.projector, op.coefficients, x)

    def sector_weights(self, projector: CondensateProjector, x: np.ndarray) -> np.ndarray:
        rotated = self._rotate(projector, x)
        return np.bincount(
            self.excitations(projector).reshape(-1),
            weights=(np.abs(rotated) ** 2).reshape(-1),
            minlength=self.n_particles + 1,
        )

    def rest_excitation_weights(self, projector: CondensateProjector, x: np.ndarray, coefficients: np.ndarray) -> float:
        """sum over entries of c_k^2 * (rest excitations) * |rotated entry|^2."""
        rotated = self._rotate(projector, x)
        k = self.excitations(projector)
        rest = projector.excitations(self.rest)[None, None, :]
        return float(np.sum(np.asarray(coefficients)[k] ** 2 * rest * np.abs(rotated) ** 2))

    # composite operators

    def r12(self, projector: CondensateProjector, weight_m: WeightFunction, x: np.ndarray,
            variants: Optional[Dict[str, CountingOperator]] = None) -> np.ndarray:
        """R_12 = p_1 p_2 m^b + (p_1 q_2 + q_1 p_2) m^a."""
        variants = variants or build_m_variants(weight_m, projector)
        p, q = projector.p, projector.q
        mb = self.apply(variants["b"], x)
        ma = self.apply(variants["a"], x)
        both = self.slot1(p, self.slot2(p, mb))
        mixed = self.slot1(p, self.slot2(q, ma)) + self.slot1(q, self.slot2(p, ma))
        return both + mixed


def apply_r12(
    psi: ManyBodyState,
    proj: CondensateProjector,
    weight_m: WeightFunction,
    space: Optional[TwoSlotSpace] = None,
) -> ManyBodyState:
    """Symmetric part of R_12 psi, mapped back to the occupation basis."""
    if psi.n_particles < 2:
        raise StructuralError("R_12 needs N >= 2")
    space = space or TwoSlotSpace(psi.basis)
    return space.project(space.r12(proj, weight_m, space.embed(psi)))
