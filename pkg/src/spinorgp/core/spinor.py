"""
Two-component spinor fields on a grid and spinor orbitals on a lattice ring.

Continuum quantities carry the cell-volume weight so that discrete norms
approximate L^2 norms; lattice orbitals use the plain l^2 norm.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from spinorgp.core.grid import Grid
from spinorgp.utils.errors import ContractError, StructuralError

NORM_TOLERANCE = 1e-12


@dataclass
class SpinorField:
    """Order parameter (u, v) sampled on ``grid``."""

    grid: Grid
    u: np.ndarray
    v: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=complex)
        self.v = np.asarray(self.v, dtype=complex)
        if self.u.shape != self.grid.shape or self.v.shape != self.grid.shape:
            raise StructuralError(
                f"spinor components {self.u.shape}/{self.v.shape} do not match grid {self.grid.shape}"
            )
        if self.normalized and abs(spinor_norm2(self) - 1.0) > NORM_TOLERANCE:
            raise ContractError(f"field flagged normalized has norm^2 {spinor_norm2(self)!r}")

    def copy(self) -> "SpinorField":
        return SpinorField(self.grid, self.u.copy(), self.v.copy(), self.normalized)

    def stacked(self) -> np.ndarray:
        """Components as one array of shape ``(*grid.shape, 2)``."""
        return np.stack([self.u, self.v], axis=-1)

    @classmethod
    def from_stacked(cls, grid: Grid, psi: np.ndarray, normalized: bool = False) -> "SpinorField":
        return cls(grid, psi[..., 0], psi[..., 1], normalized)

    def density(self) -> np.ndarray:
        return np.abs(self.u) ** 2 + np.abs(self.v) ** 2


def _check_shapes(f: SpinorField) -> None:
    if f.u.shape != f.grid.shape or f.v.shape != f.grid.shape:
        raise StructuralError(
            f"spinor components {f.u.shape}/{f.v.shape} do not match grid {f.grid.shape}"
        )


def spinor_norm2(f: SpinorField) -> float:
    """Cell-weighted sum of |u|^2 + |v|^2."""
    _check_shapes(f)
    total = np.sum(f.u.real ** 2 + f.u.imag ** 2) + np.sum(f.v.real ** 2 + f.v.imag ** 2)
    return float(total * f.grid.cell_volume)


def inner_product(f: SpinorField, g: SpinorField) -> complex:
    """<f, g> with the conjugate on the first argument."""
    _check_shapes(f)
    _check_shapes(g)
    if f.grid != g.grid:
        raise StructuralError("inner product of fields on different grids")
    return complex((np.vdot(f.u, g.u) + np.vdot(f.v, g.v)) * f.grid.cell_volume)


def populations(f: SpinorField) -> Tuple[float, float]:
    """(||u||^2, ||v||^2)."""
    _check_shapes(f)
    w = f.grid.cell_volume
    return float(np.sum(np.abs(f.u) ** 2) * w), float(np.sum(np.abs(f.v) ** 2) * w)


def normalize(f: SpinorField) -> SpinorField:
    norm2 = spinor_norm2(f)
    if norm2 == 0.0:
        raise ContractError("cannot normalize the zero field")
    scale = 1.0 / np.sqrt(norm2)
    return SpinorField(f.grid, f.u * scale, f.v * scale, normalized=True)


def global_phase(f: SpinorField, theta: float) -> SpinorField:
    phase = np.exp(1j * theta)
    return SpinorField(f.grid, f.u * phase, f.v * phase, f.normalized)


def spin_marginal(f: SpinorField) -> np.ndarray:
    """Spin-only reduced matrix: spatial degrees traced out, 2x2 Hermitian."""
    w = f.grid.cell_volume
    uu = np.vdot(f.u, f.u) * w
    vv = np.vdot(f.v, f.v) * w
    uv = np.vdot(f.v, f.u) * w
    return np.array([[uu, uv], [np.conj(uv), vv]], dtype=complex)


def require_normalized(f: SpinorField, tolerance: float = 1e-9) -> None:
    norm2 = spinor_norm2(f)
    if abs(norm2 - 1.0) > tolerance:
        raise ContractError(f"spinor field must be normalized, norm^2 = {norm2:.3e}")


@dataclass
class LatticeOrbital:
    """
    Spinor orbital on a ring of ``d`` sites.

    ``amplitudes`` has shape ``(d, 2)``; flattening it gives the mode order
    ``2 * site + spin`` used by the many-body basis.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.ndim != 2 or self.amplitudes.shape[1] != 2:
            raise StructuralError(
                f"lattice orbital must have shape (sites, 2), got {self.amplitudes.shape}"
            )

    @property
    def sites(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def vector(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)

    @classmethod
    def from_vector(cls, vector: np.ndarray) -> "LatticeOrbital":
        return cls(np.asarray(vector, dtype=complex).reshape(-1, 2))

    @property
    def u(self) -> np.ndarray:
        return self.amplitudes[:, 0]

    @property
    def v(self) -> np.ndarray:
        return self.amplitudes[:, 1]

    def norm2(self) -> float:
        return float(np.vdot(self.vector, self.vector).real)

    def normalized(self) -> "LatticeOrbital":
        norm2 = self.norm2()
        if norm2 == 0.0:
            raise ContractError("cannot normalize the zero orbital")
        return LatticeOrbital(self.amplitudes / np.sqrt(norm2))

    def require_normalized(self, tolerance: float = NORM_TOLERANCE) -> None:
        if abs(self.norm2() - 1.0) > tolerance:
            raise ContractError(f"lattice orbital must be normalized, norm^2 = {self.norm2():.3e}")

    def density(self) -> np.ndarray:
        """Site density |u|^2 + |v|^2."""
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)

    def projector(self) -> np.ndarray:
        """|phi><phi| on the 2d-dimensional one-body space."""
        return np.outer(self.vector, self.vector.conj())
