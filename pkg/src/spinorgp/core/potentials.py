"""
Matrix potential S(x, t) of the two-level condensate.

Components are small callable descriptors evaluated on position arrays of
shape ``(..., dim)``; each also knows its own time derivative so that the
energy-derivative term can be evaluated without numerical differencing.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from spinorgp.core.linalg import hermitian_norm_2x2
from spinorgp.utils.errors import ConfigurationError, EvaluationError, HorizonError

RESONANCE_TOLERANCE = 1e-12


def _batch_shape(x: np.ndarray):
    return np.shape(x)[:-1]


class Component(ABC):
    """Real scalar function of position and time."""

    @abstractmethod
    def __call__(self, x: np.ndarray, t: float) -> np.ndarray:
        """Evaluate on positions ``x`` of shape ``(..., dim)``."""

    @abstractmethod
    def time_derivative(self, x: np.ndarray, t: float) -> np.ndarray:
        """Partial derivative in t on the same positions."""

    @property
    def time_dependent(self) -> bool:
        return False

    @property
    def is_zero(self) -> bool:
        return False

    @property
    def uniform(self) -> bool:
        """True when the value does not depend on position."""
        return False

    def scalar(self, t: float) -> float:
        """Scalar value of a uniform component."""
        raise NotImplementedError(f"{type(self).__name__} depends on position")


@dataclass(frozen=True)
class Zero(Component):
    def __call__(self, x, t):
        return np.zeros(_batch_shape(x))

    def time_derivative(self, x, t):
        return np.zeros(_batch_shape(x))

    @property
    def is_zero(self) -> bool:
        return True

    @property
    def uniform(self) -> bool:
        return True

    def scalar(self, t):
        return 0.0


@dataclass(frozen=True)
class Constant(Component):
    value: float = 0.0

    def __call__(self, x, t):
        return np.full(_batch_shape(x), float(self.value))

    def time_derivative(self, x, t):
        return np.zeros(_batch_shape(x))

    @property
    def is_zero(self) -> bool:
        return self.value == 0.0

    @property
    def uniform(self) -> bool:
        return True

    def scalar(self, t):
        return float(self.value)


@dataclass(frozen=True)
class HarmonicTrap(Component):
    """omega^2 |x - center|^2 / 4 plus an offset (units with 2m = 1)."""

    omega: float = 1.0
    center: Sequence[float] = (0.0,)
    offset: float = 0.0

    def __call__(self, x, t):
        x = np.asarray(x, dtype=float)
        c = np.broadcast_to(np.asarray(self.center, dtype=float), (x.shape[-1],))
        r2 = np.sum((x - c) ** 2, axis=-1)
        return 0.25 * self.omega ** 2 * r2 + self.offset

    def time_derivative(self, x, t):
        return np.zeros(_batch_shape(x))


@dataclass(frozen=True)
class RabiCosine(Component):
    """amplitude * cos(frequency * t + phase), uniform in space."""

    amplitude: float
    frequency: float
    phase: float = 0.0

    def __call__(self, x, t):
        return np.full(_batch_shape(x), self.amplitude * np.cos(self.frequency * t + self.phase))

    def time_derivative(self, x, t):
        value = -self.amplitude * self.frequency * np.sin(self.frequency * t + self.phase)
        return np.full(_batch_shape(x), value)

    @property
    def time_dependent(self) -> bool:
        return self.frequency != 0.0 and self.amplitude != 0.0

    @property
    def is_zero(self) -> bool:
        return self.amplitude == 0.0

    @property
    def uniform(self) -> bool:
        return True

    def scalar(self, t):
        return self.amplitude * math.cos(self.frequency * t + self.phase)


@dataclass(frozen=True)
class RabiSine(Component):
    """-amplitude * sin(frequency * t + phase), uniform in space."""

    amplitude: float
    frequency: float
    phase: float = 0.0

    def __call__(self, x, t):
        return np.full(_batch_shape(x), -self.amplitude * np.sin(self.frequency * t + self.phase))

    def time_derivative(self, x, t):
        value = -self.amplitude * self.frequency * np.cos(self.frequency * t + self.phase)
        return np.full(_batch_shape(x), value)

    @property
    def time_dependent(self) -> bool:
        return self.frequency != 0.0 and self.amplitude != 0.0

    @property
    def is_zero(self) -> bool:
        return self.amplitude == 0.0

    @property
    def uniform(self) -> bool:
        return True

    def scalar(self, t):
        return -self.amplitude * math.sin(self.frequency * t + self.phase)


@dataclass(frozen=True)
class RabiParams:
    """Two-photon drive: Rabi frequency, drive frequency and hyperfine offset."""

    omega_rabi: float
    omega_drive: float
    v_hf_const: float

    def __post_init__(self):
        if self.omega_rabi < 0 or self.omega_drive < 0:
            raise ConfigurationError("Rabi and drive frequencies must be nonnegative")

    @classmethod
    def resonant(cls, omega_rabi: float, omega_drive: float) -> "RabiParams":
        return cls(omega_rabi, omega_drive, 0.5 * omega_drive)

    @property
    def is_resonant(self) -> bool:
        return abs(self.v_hf_const - 0.5 * self.omega_drive) <= RESONANCE_TOLERANCE

    @staticmethod
    def solver_units(omega_rabi_hz: float, omega_drive_hz: float) -> Dict[str, float]:
        """
        Rescale physical angular frequencies (rad/s) so that the Rabi frequency is 1.

        The time unit becomes ``1 / omega_rabi_hz`` seconds.
        """
        if omega_rabi_hz <= 0:
            raise ConfigurationError("physical Rabi frequency must be positive")
        return {
            "time_unit_seconds": 1.0 / omega_rabi_hz,
            "omega_rabi": 1.0,
            "omega_drive": omega_drive_hz / omega_rabi_hz,
        }


@dataclass(frozen=True)
class MatrixPotential:
    """
    S(x,t) = [[trap_up - v_hf, b1 - i b2], [b1 + i b2, trap_down + v_hf]].

    ``horizon`` bounds the admissible evaluation times when set.
    """

    trap_up: Component = field(default_factory=Zero)
    trap_down: Component = field(default_factory=Zero)
    b1: Component = field(default_factory=Zero)
    b2: Component = field(default_factory=Zero)
    v_hf: Component = field(default_factory=Zero)
    horizon: Optional[float] = None

    FIELDS = ("trap_up", "trap_down", "b1", "b2", "v_hf")

    @classmethod
    def zero(cls) -> "MatrixPotential":
        return cls()

    @classmethod
    def rabi(
        cls,
        params: RabiParams,
        trap_up: Optional[Component] = None,
        trap_down: Optional[Component] = None,
        horizon: Optional[float] = None,
    ) -> "MatrixPotential":
        """Plane-rotating drive b1 = Omega cos(omega t), b2 = -Omega sin(omega t)."""
        return cls(
            trap_up=trap_up or Zero(),
            trap_down=trap_down or Zero(),
            b1=RabiCosine(params.omega_rabi, params.omega_drive),
            b2=RabiSine(params.omega_rabi, params.omega_drive),
            v_hf=Constant(params.v_hf_const),
            horizon=horizon,
        )

    def components(self) -> Dict[str, Component]:
        return {name: getattr(self, name) for name in self.FIELDS}

    @property
    def time_dependent(self) -> bool:
        return any(c.time_dependent for c in self.components().values())

    @property
    def spin_flip_free(self) -> bool:
        """True when S12 = S21 = 0 identically."""
        return self.b1.is_zero and self.b2.is_zero

    def _check_time(self, t: float) -> None:
        if self.horizon is not None and t > self.horizon * (1 + 1e-12):
            raise HorizonError(f"t = {t} beyond configured horizon {self.horizon}")

    @property
    def spatially_uniform(self) -> bool:
        return all(c.uniform for c in self.components().values())

    def _evaluate_fields(
        self, x: np.ndarray, t: float, derivative: bool, check: bool = True
    ) -> Dict[str, np.ndarray]:
        values = {}
        for name, comp in self.components().items():
            value = comp.time_derivative(x, t) if derivative else comp(x, t)
            value = np.asarray(value, dtype=float)
            if check and not np.all(np.isfinite(value)):
                raise EvaluationError(f"potential component '{name}' is not finite at t = {t}", field=name)
            values[name] = value
        return values

    @staticmethod
    def _assemble(values: Dict[str, np.ndarray]) -> np.ndarray:
        shape = values["trap_up"].shape
        out = np.empty(shape + (2, 2), dtype=complex)
        out[..., 0, 0] = values["trap_up"] - values["v_hf"]
        out[..., 1, 1] = values["trap_down"] + values["v_hf"]
        out[..., 0, 1] = values["b1"] - 1j * values["b2"]
        out[..., 1, 0] = values["b1"] + 1j * values["b2"]
        return out

    def evaluate(self, x: np.ndarray, t: float, check: bool = True) -> np.ndarray:
        """
        S on positions of shape ``(..., dim)``; returns ``(..., 2, 2)``.

        ``check=False`` skips the finiteness scan of the components.
        """
        self._check_time(t)
        values = self._evaluate_fields(np.asarray(x, dtype=float), t, derivative=False, check=check)
        return self._assemble(values)

    def pauli_at(self, t: float, check: bool = True) -> Tuple[float, float, float, float]:
        """
        Coefficients (c0, cx, cy, cz) of S = c0 I + c . sigma for a spatially uniform potential.

        Raises:
            EvaluationError: if a component value is not finite and ``check`` is set
        """
        self._check_time(t)
        values = {name: comp.scalar(t) for name, comp in self.components().items()}
        if check:
            for name, value in values.items():
                if not math.isfinite(value):
                    raise EvaluationError(f"potential component '{name}' is not finite at t = {t}", field=name)
        c0 = 0.5 * (values["trap_up"] + values["trap_down"])
        cz = 0.5 * (values["trap_up"] - values["trap_down"]) - values["v_hf"]
        return c0, values["b1"], values["b2"], cz

    def time_derivative(self, x: np.ndarray, t: float) -> np.ndarray:
        """dS/dt on positions of shape ``(..., dim)``."""
        self._check_time(t)
        return self._assemble(self._evaluate_fields(np.asarray(x, dtype=float), t, derivative=True))

    def sample_lattice(self, positions: np.ndarray, t: float) -> np.ndarray:
        """Per-site 2x2 blocks for site positions given as a 1D array."""
        return self.evaluate(np.asarray(positions, dtype=float)[:, None], t)

    def sup_norm(self, x: np.ndarray, times: Iterable[float]) -> float:
        """Largest spectral norm of S over the positions and sample times."""
        largest = 0.0
        if self.spatially_uniform:
            for t in times:
                c0, cx, cy, cz = self.pauli_at(t)
                largest = max(largest, abs(c0) + math.sqrt(cx * cx + cy * cy + cz * cz))
            return largest
        for t in times:
            largest = max(largest, float(np.max(hermitian_norm_2x2(self.evaluate(x, t)), initial=0.0)))
        return largest


def assemble_S(p: MatrixPotential, x, t: float) -> np.ndarray:
    """S(x, t) as a single 2x2 complex matrix."""
    point = np.atleast_1d(np.asarray(x, dtype=float))
    return p.evaluate(point[None, :], t)[0]
