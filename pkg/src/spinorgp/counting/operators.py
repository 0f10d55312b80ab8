"""Weighted counting operators f_d = sum_k f(k + d) P_k and the m-hat family."""

from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

import numpy as np

from spinorgp.counting.projector import CondensateProjector
from spinorgp.counting.weights import WeightFunction
from spinorgp.manybody.basis import SymmetricBasis
from spinorgp.manybody.states import ManyBodyState
from spinorgp.utils.errors import ConfigurationError, StructuralError

# (shift, factor) terms of m-hat^a .. m-hat^e
M_VARIANTS: Dict[str, Tuple[Tuple[int, float], ...]] = {
    "a": ((0, 1.0), (1, -1.0)),
    "b": ((0, 1.0), (2, -1.0)),
    "c": ((0, 1.0), (2, -2.0), (4, 1.0)),
    "d": ((0, 1.0), (1, -1.0), (2, -1.0), (3, 1.0)),
    "e": ((0, 1.0), (1, -2.0), (2, 1.0)),
}


@dataclass(frozen=True, eq=False)
class CountingOperator:
    """
    Diagonal operator in the excitation number of ``projector``.

    ``coefficients[k]`` multiplies P_k for k = 0..N; every such operator is
    self-adjoint when the coefficients are real, and any two commute.
    """

    projector: CondensateProjector
    coefficients: np.ndarray
    label: str = "f"

    def __post_init__(self):
        coefficients = np.asarray(self.coefficients, dtype=float)
        if coefficients.shape != (self.projector.n_particles + 1,):
            raise StructuralError(
                f"{self.label}: need {self.projector.n_particles + 1} coefficients, got {coefficients.shape}"
            )
        object.__setattr__(self, "coefficients", coefficients)

    @classmethod
    def from_weight(cls, weight: WeightFunction, projector: CondensateProjector, shift: int = 0) -> "CountingOperator":
        if weight.n_particles != projector.n_particles:
            raise ConfigurationError("weight and projector disagree on N")
        label = f"{weight.kind}_{shift}" if shift else weight.kind
        return cls(projector, weight.shifted(shift), label)

    @property
    def n_particles(self) -> int:
        return self.projector.n_particles

    def apply_amplitudes(self, amplitudes: np.ndarray, basis: SymmetricBasis) -> np.ndarray:
        return self.projector.apply_diagonal(amplitudes, basis, self.coefficients)

    def apply(self, psi: ManyBodyState) -> ManyBodyState:
        return psi.with_amplitudes(self.apply_amplitudes(psi.amplitudes, psi.basis))

    def expectation(self, psi: ManyBodyState) -> float:
        """sum_k c_k ||P_k psi||^2."""
        return float(self.coefficients @ self.projector.sector_weights(psi))

    def operator_norm(self) -> float:
        return float(np.max(np.abs(self.coefficients)))

    def __mul__(self, other: "CountingOperator") -> "CountingOperator":
        self._check_compatible(other)
        return CountingOperator(self.projector, self.coefficients * other.coefficients, f"{self.label}*{other.label}")

    def __add__(self, other: "CountingOperator") -> "CountingOperator":
        self._check_compatible(other)
        return CountingOperator(self.projector, self.coefficients + other.coefficients, f"{self.label}+{other.label}")

    def __sub__(self, other: "CountingOperator") -> "CountingOperator":
        self._check_compatible(other)
        return CountingOperator(self.projector, self.coefficients - other.coefficients, f"{self.label}-{other.label}")

    def _check_compatible(self, other: "CountingOperator") -> None:
        if other.projector is not self.projector:
            raise ConfigurationError("counting operators built on different projectors")


def apply_counting(psi: ManyBodyState, op: CountingOperator) -> ManyBodyState:
    if psi.n_particles != op.n_particles:
        raise StructuralError(f"operator built for N = {op.n_particles}, state has N = {psi.n_particles}")
    return op.apply(psi)


def combination(weight: WeightFunction, terms: Sequence[Tuple[int, float]]) -> np.ndarray:
    """sum of factor * f(k + shift) over ``terms``."""
    return sum(factor * weight.shifted(shift) for shift, factor in terms)


def build_m_variants(weight_m: WeightFunction, projector: CondensateProjector) -> Dict[str, CountingOperator]:
    """m-hat^a .. m-hat^e as differences of shifted m-hat."""
    if weight_m.kind != "m":
        raise ConfigurationError(f"m-hat variants need the m weight, got kind {weight_m.kind!r}")
    return {
        name: CountingOperator(projector, combination(weight_m, terms), f"m^{name}")
        for name, terms in M_VARIANTS.items()
    }


def variant_norm_bounds(weight_m: WeightFunction) -> Dict[str, float]:
    """Operator norms of the variants next to the N^{-1+xi} and N^{-2+3xi} envelopes."""
    n, xi = float(weight_m.n_particles), weight_m.xi
    out = {f"norm_{name}": float(np.max(np.abs(combination(weight_m, terms)))) for name, terms in M_VARIANTS.items()}
    out["envelope_first"] = n ** (-1.0 + xi)
    out["envelope_second"] = n ** (-2.0 + 3.0 * xi)
    return out
