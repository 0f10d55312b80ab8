"""
Symmetric occupation-number basis for N bosons over M modes.

States are ordered lexicographically by occupation tuple. Each occupation
vector maps to an int64 key in radix N + 1 (mode 0 most significant), so the
ordering by key is the lexicographic order and index lookup is a
``searchsorted`` over the sorted keys.
"""

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import comb
from typing import Dict, Optional, Tuple

import numpy as np
import scipy.sparse as sp
from loguru import logger

from spinorgp.utils.errors import SizeError, StructuralError

DEFAULT_BASIS_CAP = 200_000
_INT64_LIMIT = np.iinfo(np.int64).max


def basis_dimension(n_modes: int, n_particles: int) -> int:
    return comb(n_modes + n_particles - 1, n_particles)


@dataclass
class SymmetricBasis:
    """Occupation basis with bijective index maps."""

    n_modes: int
    n_particles: int
    occupations: np.ndarray
    keys: np.ndarray
    _terms: Dict[Tuple[int, int], sp.csr_matrix] = field(default_factory=dict, repr=False)

    @property
    def dimension(self) -> int:
        return int(self.occupations.shape[0])

    @property
    def sites(self) -> int:
        return self.n_modes // 2

    @property
    def radix(self) -> int:
        return self.n_particles + 1

    def encode(self, occupations: np.ndarray) -> np.ndarray:
        """int64 keys of occupation rows."""
        occupations = np.asarray(occupations, dtype=np.int64)
        weights = self.radix ** np.arange(self.n_modes - 1, -1, -1, dtype=np.int64)
        return occupations @ weights

    def index_of(self, occupations: np.ndarray) -> np.ndarray:
        """Indices of occupation rows; raises if any row is not in the basis."""
        occupations = np.atleast_2d(occupations)
        keys = self.encode(occupations)
        idx = np.searchsorted(self.keys, keys)
        idx_clipped = np.minimum(idx, self.dimension - 1)
        if np.any(self.keys[idx_clipped] != keys) or np.any(occupations.sum(axis=1) != self.n_particles):
            raise StructuralError("occupation vector outside the basis")
        return idx_clipped

    def occupation(self, index: int) -> Tuple[int, ...]:
        return tuple(int(n) for n in self.occupations[index])

    def site_occupations(self) -> np.ndarray:
        """Particles per site, summed over spin: shape (dimension, sites)."""
        return self.occupations[:, 0::2] + self.occupations[:, 1::2]

    def hop(self, alpha: int, beta: int) -> sp.csr_matrix:
        """Sparse matrix of a^dagger_alpha a_beta, cached."""
        key = (alpha, beta)
        if key not in self._terms:
            self._terms[key] = _one_body_term(self, alpha, beta)
        return self._terms[key]


def build_basis(
    d: int,
    n: int,
    cap: Optional[int] = None,
    modes_per_site: int = 2,
) -> SymmetricBasis:
    """
    Enumerate N-particle occupations over ``modes_per_site * d`` modes.

    Raises:
        SizeError: if the dimension exceeds ``cap``
    """
    if n < 0 or d < 1:
        raise StructuralError(f"invalid basis request: sites = {d}, particles = {n}")
    n_modes = modes_per_site * d
    return build_mode_basis(n_modes, n, cap)


def build_mode_basis(n_modes: int, n: int, cap: Optional[int] = None) -> SymmetricBasis:
    """Basis over an explicit number of modes."""
    cap = DEFAULT_BASIS_CAP if cap is None else cap
    dimension = basis_dimension(n_modes, n)
    if dimension > cap:
        raise SizeError(
            f"basis dimension {dimension} exceeds cap {cap} ({n} particles, {n_modes} modes)",
            required=dimension,
            cap=cap,
        )
    if (n + 1) ** n_modes > _INT64_LIMIT:
        raise SizeError(
            f"occupation keys overflow int64 for {n} particles over {n_modes} modes",
            required=dimension,
            cap=cap,
        )

    occupations = np.zeros((dimension, n_modes), dtype=np.int64)
    for row, combo in enumerate(combinations_with_replacement(range(n_modes), n)):
        for mode in combo:
            occupations[row, mode] += 1

    basis = SymmetricBasis(n_modes, n, occupations, np.zeros(dimension, dtype=np.int64))
    keys = basis.encode(occupations)
    order = np.argsort(keys, kind="stable")
    basis.occupations = occupations[order]
    basis.keys = keys[order]
    logger.debug(f"Built basis: {n} particles, {n_modes} modes, dimension {dimension}")
    return basis


def _one_body_term(basis: SymmetricBasis, alpha: int, beta: int) -> sp.csr_matrix:
    dim = basis.dimension
    occ = basis.occupations
    if alpha == beta:
        return sp.diags(occ[:, alpha].astype(float), format="csr")

    sources = np.nonzero(occ[:, beta] > 0)[0]
    targets_occ = occ[sources].copy()
    amplitude = np.sqrt(targets_occ[:, beta] * (targets_occ[:, alpha] + 1.0))
    targets_occ[:, beta] -= 1
    targets_occ[:, alpha] += 1
    targets = basis.index_of(targets_occ) if len(sources) else np.zeros(0, dtype=np.int64)
    return sp.csr_matrix((amplitude, (targets, sources)), shape=(dim, dim))


def annihilation(source: SymmetricBasis, target: SymmetricBasis, mode: int) -> sp.csr_matrix:
    """a_mode as a map from the N-particle basis to the (N-1)-particle basis."""
    if target.n_particles != source.n_particles - 1 or target.n_modes != source.n_modes:
        raise StructuralError("annihilation needs bases with N and N - 1 particles over the same modes")
    occ = source.occupations
    sources = np.nonzero(occ[:, mode] > 0)[0]
    lowered = occ[sources].copy()
    amplitude = np.sqrt(lowered[:, mode].astype(float))
    lowered[:, mode] -= 1
    targets = target.index_of(lowered) if len(sources) else np.zeros(0, dtype=np.int64)
    return sp.csr_matrix((amplitude, (targets, sources)), shape=(target.dimension, source.dimension))


def one_body_operator(basis: SymmetricBasis, matrix: np.ndarray, tolerance: float = 0.0) -> sp.csr_matrix:
    """Second quantization sum_{ab} h_ab a^dagger_a a_b of a one-body matrix."""
    matrix = np.asarray(matrix)
    if matrix.shape != (basis.n_modes, basis.n_modes):
        raise StructuralError(f"one-body matrix {matrix.shape} does not match {basis.n_modes} modes")
    total = sp.csr_matrix((basis.dimension, basis.dimension), dtype=complex)
    for alpha, beta in zip(*np.nonzero(np.abs(matrix) > tolerance)):
        total = total + matrix[alpha, beta] * basis.hop(int(alpha), int(beta))
    return total.tocsr()
