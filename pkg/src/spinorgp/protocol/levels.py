"""
Measurement protocol on three-level spinors (up, down, m).

The imaging level m is only used during measurement. Each operation acts on
every particle at once, so it is a map on one-body spinors:

    pump   (u, v, w) -> (0, u + v, w)
    blow   (u, v, w) -> (u, 0, w)
    probe  (u, v, w) -> (u, 0, w + v)
    select (u, v, w) -> (0, 0, w), then image |w(x)|^2

The m level is left alone by pump and blow and only receives population
from probe.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from spinorgp.core.spinor import LatticeOrbital, SpinorField
from spinorgp.utils.errors import StructuralError


@dataclass(eq=False)
class ThreeLevelSpinor:
    """
    Components on a grid or a lattice; ``weight`` is the cell volume
    (1 for lattice orbitals) entering norms and integrated images.
    """

    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    weight: float = 1.0

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=complex)
        self.v = np.asarray(self.v, dtype=complex)
        self.w = np.asarray(self.w, dtype=complex)
        if not self.u.shape == self.v.shape == self.w.shape:
            raise StructuralError(
                f"level components differ in shape: {self.u.shape}, {self.v.shape}, {self.w.shape}"
            )
        if not np.isfinite(self.weight) or self.weight <= 0:
            raise StructuralError("cell weight must be positive")

    @classmethod
    def from_field(cls, f: Union[SpinorField, LatticeOrbital]) -> "ThreeLevelSpinor":
        """Embed a two-level spinor with an empty m level."""
        if isinstance(f, LatticeOrbital):
            return cls(f.u, f.v, np.zeros_like(f.u))
        return cls(f.u, f.v, np.zeros_like(f.u), f.grid.cell_volume)

    def _with(self, u, v, w) -> "ThreeLevelSpinor":
        return ThreeLevelSpinor(u, v, w, self.weight)

    def level_norms2(self) -> np.ndarray:
        """(||u||^2, ||v||^2, ||w||^2)."""
        return np.array([np.sum(np.abs(c) ** 2) * self.weight for c in (self.u, self.v, self.w)])

    def norm2(self) -> float:
        return float(self.level_norms2().sum())


def pump(s: ThreeLevelSpinor) -> ThreeLevelSpinor:
    return s._with(np.zeros_like(s.u), s.u + s.v, s.w)


def blow(s: ThreeLevelSpinor) -> ThreeLevelSpinor:
    """Discard the down population."""
    return s._with(s.u, np.zeros_like(s.v), s.w)


def probe(s: ThreeLevelSpinor) -> ThreeLevelSpinor:
    return s._with(s.u, np.zeros_like(s.v), s.w + s.v)


def select_and_image(s: ThreeLevelSpinor) -> np.ndarray:
    """Project onto the m level and return |w(x)|^2; it integrates to ||w||^2 with the cell weight."""
    return np.abs(s.w) ** 2


def measure_up(s: ThreeLevelSpinor) -> np.ndarray:
    """blow, pump, probe, image: |u|^2."""
    return select_and_image(probe(pump(blow(s))))


def measure_down(s: ThreeLevelSpinor) -> np.ndarray:
    """probe, image: |v|^2."""
    return select_and_image(probe(s))


def measure_joint(s: ThreeLevelSpinor) -> np.ndarray:
    """pump, probe, image: |u + v|^2, the combined profile when u and v do not overlap."""
    return select_and_image(probe(pump(s)))


def integrated(image: np.ndarray, weight: float = 1.0) -> float:
    return float(np.sum(image) * weight)
