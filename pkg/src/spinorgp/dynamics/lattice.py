"""
Effective one-body equation on the many-body ring.

    i d/dt phi_i = (T phi)_i + S_i(t) phi_i + U_i(rho) phi_i

with rho_i = |u_i|^2 + |v_i|^2 and either a Hartree term U = V * rho
(convolution with the pair potential over ring separations) or a contact
term U = g rho, g the sum of V over all separations. Both coincide when V is
purely on-site. Stepping mirrors the continuum solver: per-site 2x2
exponentials around an exact hopping exponential.
"""

from dataclasses import dataclass
from typing import Callable, Literal, Optional

import numpy as np
import scipy.linalg as la

from spinorgp.core.linalg import apply_2x2, matexp_2x2
from spinorgp.core.spinor import LatticeOrbital
from spinorgp.manybody.model import LatticeModel
from spinorgp.utils.errors import BlowUpError, ConfigurationError

CouplingKind = Literal["hartree", "contact"]

OrbitalCallback = Callable[[float, LatticeOrbital], None]


@dataclass
class LatticeEffectiveEquation:
    """Mean-field limit equation for a :class:`LatticeModel`."""

    model: LatticeModel
    coupling: CouplingKind = "contact"

    def __post_init__(self):
        if self.coupling not in ("hartree", "contact"):
            raise ConfigurationError(f"unknown coupling kind {self.coupling!r}")
        self._kinetic_cache = {}

    @property
    def label(self) -> str:
        if self.coupling == "contact":
            return f"contact g = sum_s V(s) = {self.model.contact_coupling():.6g}"
        return "hartree V * rho"

    def mean_field(self, rho: np.ndarray) -> np.ndarray:
        if self.coupling == "contact":
            return self.model.contact_coupling() * rho
        return self.model.pair_matrix() @ rho

    def _kinetic(self, dt: float) -> np.ndarray:
        if dt not in self._kinetic_cache:
            self._kinetic_cache[dt] = la.expm(-1j * dt * self.model.kinetic_matrix())
        return self._kinetic_cache[dt]

    def _pointwise_half(self, amplitudes: np.ndarray, t_mid: float, half: float) -> np.ndarray:
        rho = np.sum(np.abs(amplitudes) ** 2, axis=1)
        blocks = self.model.onebody_blocks(t_mid).copy()
        shift = self.mean_field(rho)
        blocks[:, 0, 0] += shift
        blocks[:, 1, 1] += shift
        return apply_2x2(matexp_2x2(blocks, half, check=False), amplitudes)

    def step(self, orbital: LatticeOrbital, t: float, dt: float) -> LatticeOrbital:
        amplitudes = orbital.amplitudes
        t_mid = t + 0.5 * dt
        amplitudes = self._pointwise_half(amplitudes, t_mid, 0.5 * dt)
        amplitudes = self._kinetic(dt) @ amplitudes
        amplitudes = self._pointwise_half(amplitudes, t_mid, 0.5 * dt)
        if not np.all(np.isfinite(amplitudes)):
            raise BlowUpError(f"non-finite lattice orbital at t = {t:g}", step=int(round(t / dt)))
        return LatticeOrbital(amplitudes)

    def evolve(
        self,
        orbital: LatticeOrbital,
        t0: float,
        t1: float,
        dt: float,
        callback: Optional[OrbitalCallback] = None,
    ) -> LatticeOrbital:
        """Advance from t0 to t1; the step is shortened to land on t1."""
        orbital.require_normalized()
        if dt <= 0 or t1 < t0:
            raise ConfigurationError("need dt > 0 and t1 >= t0")
        if t1 == t0:
            return orbital
        n_steps = max(1, int(np.ceil((t1 - t0) / dt - 1e-12)))
        h = (t1 - t0) / n_steps
        for index in range(n_steps):
            orbital = self.step(orbital, t0 + index * h, h)
            if callback is not None:
                callback(t0 + (index + 1) * h, orbital)
        return orbital

    def energy(self, orbital: LatticeOrbital, t: float) -> float:
        """<phi, h(t) phi> + interaction energy matching the chosen coupling."""
        phi = orbital.vector
        one_body = np.vdot(phi, self.model.onebody_matrix(t) @ phi).real
        rho = orbital.density()
        interaction = 0.5 * float(rho @ self.mean_field(rho))
        return float(one_body + interaction)

    def s_dot_expectation(self, orbital: LatticeOrbital, t: float) -> float:
        """<phi, dS/dt phi> summed over sites."""
        blocks = self.model.onebody_derivative_blocks(t)
        amps = orbital.amplitudes
        return float(np.einsum("is,ist,it->", amps.conj(), blocks, amps).real)


def lattice_energy(
    orbital: LatticeOrbital, model: LatticeModel, t: float, coupling: CouplingKind = "contact"
) -> float:
    return LatticeEffectiveEquation(model, coupling).energy(orbital, t)
