"""
Weight functions k -> f(k) for the counting operators.

Weights live on the non-negative integers. The built-in kinds follow their
closed forms for every k >= 0, so shifted weights f(k + d) stay defined past
N; custom weights given as a table vanish beyond it. Negative arguments give 0.
"""

from dataclasses import dataclass
from typing import Literal, Optional, Sequence

import numpy as np

from spinorgp.utils.errors import ConfigurationError

WeightKind = Literal["n", "m", "custom"]

DEFAULT_XI = 0.1


@dataclass(frozen=True)
class WeightFunction:
    """
    n(k) = sqrt(k / N);
    m(k) = sqrt(k / N) for k >= N^{1 - 2 xi}, (N^{-1 + xi} k + N^{-xi}) / 2 below;
    custom: a table of values on 0..N.
    """

    kind: WeightKind
    n_particles: int
    xi: float = DEFAULT_XI
    table: Optional[Sequence[float]] = None

    def __post_init__(self):
        if self.kind not in ("n", "m", "custom"):
            raise ConfigurationError(f"unknown weight kind {self.kind!r}")
        if self.n_particles < 1:
            raise ConfigurationError("weights need N >= 1")
        if self.kind == "m" and self.xi <= 0:
            raise ConfigurationError(f"xi must be positive, got {self.xi}")
        if self.kind == "custom":
            if self.table is None or len(self.table) != self.n_particles + 1:
                raise ConfigurationError(f"custom weight needs {self.n_particles + 1} values")
            object.__setattr__(self, "table", tuple(float(x) for x in self.table))

    @classmethod
    def n_weight(cls, n_particles: int) -> "WeightFunction":
        return cls("n", n_particles)

    @classmethod
    def m_weight(cls, n_particles: int, xi: float = DEFAULT_XI) -> "WeightFunction":
        return cls("m", n_particles, xi)

    @classmethod
    def custom(cls, values: Sequence[float]) -> "WeightFunction":
        return cls("custom", len(values) - 1, table=values)

    @property
    def crossover(self) -> float:
        """N^{1 - 2 xi}, where m switches to the square root."""
        return float(self.n_particles) ** (1.0 - 2.0 * self.xi)

    def __call__(self, k) -> np.ndarray:
        k = np.asarray(k, dtype=float)
        n = float(self.n_particles)
        valid = k >= 0
        safe = np.where(valid, k, 0.0)
        if self.kind == "n":
            out = np.sqrt(safe / n)
        elif self.kind == "m":
            linear = 0.5 * (n ** (-1.0 + self.xi) * safe + n ** (-self.xi))
            out = np.where(safe >= self.crossover, np.sqrt(safe / n), linear)
        else:
            table = np.asarray(self.table)
            index = safe.astype(int)
            inside = index <= self.n_particles
            out = np.where(inside, table[np.minimum(index, self.n_particles)], 0.0)
        return np.where(valid, out, 0.0)

    def values(self) -> np.ndarray:
        """f(0), ..., f(N)."""
        return self(np.arange(self.n_particles + 1))

    def shifted(self, d: int) -> np.ndarray:
        """Coefficients f(k + d) of the shifted operator, k = 0..N."""
        return self(np.arange(self.n_particles + 1) + d)

    def first_difference_max(self, step: int = 1) -> float:
        """max_{k in 0..N} |f(k) - f(k + step)|."""
        return float(np.max(np.abs(self.values() - self.shifted(step))))

    def second_difference_max(self) -> float:
        """max_{k in 0..N} |f(k) - 2 f(k + 2) + f(k + 4)|."""
        return float(np.max(np.abs(self.values() - 2.0 * self.shifted(2) + self.shifted(4))))
