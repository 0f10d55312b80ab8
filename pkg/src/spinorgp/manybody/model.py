"""
Lattice model of spin-1/2-like bosons on a periodic ring.

Mode index convention: ``2 * site + spin`` with spin 0 = upper level.
"""

from dataclasses import dataclass, field
from typing import Callable, Literal, Optional

import numpy as np

from spinorgp.core.potentials import MatrixPotential
from spinorgp.utils.errors import ConfigurationError, ContractError

ScalingMode = Literal["gross-pitaevskii", "mean-field"]


def ring_separations(sites: int) -> np.ndarray:
    """Minimal ring distance |i - j| (mod d) as a d x d integer matrix."""
    i = np.arange(sites)
    raw = np.abs(i[:, None] - i[None, :])
    return np.minimum(raw, sites - raw)


@dataclass
class LatticeModel:
    """
    Ring of ``sites`` sites with hopping, per-site matrix potential and pair potential.

    ``pair_profile[s]`` is the pair energy of two particles at ring separation
    ``s`` (s = 0 is the on-site term); in mean-field mode the pair coupling is
    divided by N - 1 at assembly time.
    """

    sites: int
    hopping: float
    pair_profile: np.ndarray
    potential: MatrixPotential = field(default_factory=MatrixPotential)
    scaling_mode: ScalingMode = "mean-field"

    def __post_init__(self):
        if not 2 <= self.sites <= 8:
            raise ConfigurationError(f"ring must have between 2 and 8 sites, got {self.sites}")
        if self.hopping <= 0:
            raise ConfigurationError("hopping must be positive")
        if self.scaling_mode not in ("gross-pitaevskii", "mean-field"):
            raise ConfigurationError(f"unknown scaling mode {self.scaling_mode!r}")
        profile = np.asarray(self.pair_profile, dtype=float).reshape(-1)
        needed = self.sites // 2 + 1
        if profile.size < needed:
            profile = np.concatenate([profile, np.zeros(needed - profile.size)])
        self.pair_profile = profile[:needed]

    @property
    def modes(self) -> int:
        return 2 * self.sites

    @property
    def spacing(self) -> float:
        """Lattice spacing h with hopping = 1 / h^2."""
        return 1.0 / np.sqrt(self.hopping)

    @property
    def positions(self) -> np.ndarray:
        return (np.arange(self.sites) - 0.5 * self.sites) * self.spacing

    @classmethod
    def from_radial(
        cls,
        sites: int,
        hopping: float,
        profile: Callable[[np.ndarray], np.ndarray],
        potential: Optional[MatrixPotential] = None,
        scaling_mode: ScalingMode = "gross-pitaevskii",
    ) -> "LatticeModel":
        """Sample a radial pair potential at the ring separations times the spacing."""
        spacing = 1.0 / np.sqrt(hopping)
        separations = np.arange(sites // 2 + 1) * spacing
        values = np.asarray(profile(separations), dtype=float)
        return cls(sites, hopping, values, potential or MatrixPotential(), scaling_mode)

    def pair_matrix(self) -> np.ndarray:
        """Symmetric d x d matrix V(i - j)."""
        return self.pair_profile[ring_separations(self.sites)]

    def pair_scale(self, n_particles: int) -> float:
        if self.scaling_mode == "mean-field":
            return 1.0 / (n_particles - 1) if n_particles > 1 else 0.0
        return 1.0

    def kinetic_matrix(self) -> np.ndarray:
        """Discrete -Laplacian on the ring: hopping * (2 delta_ij - delta_{i,j+-1})."""
        d = self.sites
        t = np.zeros((d, d))
        for i in range(d):
            t[i, i] += 2.0 * self.hopping
            t[i, (i + 1) % d] -= self.hopping
            t[i, (i - 1) % d] -= self.hopping
        return t

    def onebody_blocks(self, t: float) -> np.ndarray:
        """Per-site S(x_i, t), shape (d, 2, 2)."""
        return self.potential.sample_lattice(self.positions, t)

    def onebody_derivative_blocks(self, t: float) -> np.ndarray:
        return self.potential.time_derivative(self.positions[:, None], t)

    def onebody_matrix(self, t: float) -> np.ndarray:
        """Full one-body operator (kinetic plus S) on the 2d modes."""
        h = np.kron(self.kinetic_matrix(), np.eye(2)).astype(complex)
        h += block_diagonal(self.onebody_blocks(t))
        return h

    def contact_coupling(self) -> float:
        """Sum of the pair potential over all separations, with ring multiplicity."""
        return float(np.sum(self.pair_matrix()[0]))


def block_diagonal(blocks: np.ndarray) -> np.ndarray:
    """Place per-site 2x2 blocks on the diagonal of a 2d x 2d matrix."""
    blocks = np.asarray(blocks)
    d = blocks.shape[0]
    out = np.zeros((2 * d, 2 * d), dtype=complex)
    for i in range(d):
        out[2 * i:2 * i + 2, 2 * i:2 * i + 2] = blocks[i]
    return out


def require_hermitian_blocks(blocks: np.ndarray, tolerance: float = 1e-12) -> None:
    defect = np.max(np.abs(blocks - np.conj(np.swapaxes(blocks, -1, -2))))
    if defect > tolerance:
        raise ContractError(f"per-site matrix potential is not Hermitian (defect {defect:.2e})")
