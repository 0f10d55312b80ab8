"""
Uniform periodic grids.

Coordinates are cell-centred on ``[-L/2, L/2)`` per axis; wavenumbers follow
``numpy.fft.fftfreq`` ordering so they line up with ``numpy.fft.fftn`` output.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence, Tuple, Union

import numpy as np

from spinorgp.utils.errors import ConfigurationError


@dataclass(frozen=True)
class Grid:
    """Periodic box discretized with the same point count on every axis."""

    dim: int
    points_per_axis: int
    box_length: Tuple[float, ...] = field(default=(1.0,))

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ConfigurationError(f"grid dimension must be 1, 2 or 3, got {self.dim}")
        n = self.points_per_axis
        if n < 2 or n & (n - 1):
            raise ConfigurationError(f"points_per_axis must be a power of two, got {n}")

        lengths = tuple(float(x) for x in np.broadcast_to(self.box_length, (self.dim,)))
        if any(not np.isfinite(x) or x <= 0 for x in lengths):
            raise ConfigurationError(f"box lengths must be positive, got {lengths}")
        object.__setattr__(self, "box_length", lengths)

    @classmethod
    def cube(cls, dim: int, points_per_axis: int, length: Union[float, Sequence[float]]) -> "Grid":
        """Build a grid from a scalar or per-axis box length."""
        lengths = tuple(np.broadcast_to(np.asarray(length, dtype=float), (dim,)))
        return cls(dim=dim, points_per_axis=points_per_axis, box_length=lengths)

    @property
    def periodic(self) -> bool:
        return True

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.points_per_axis,) * self.dim

    @property
    def n_points(self) -> int:
        return self.points_per_axis ** self.dim

    @property
    def spacing(self) -> Tuple[float, ...]:
        return tuple(length / self.points_per_axis for length in self.box_length)

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def volume(self) -> float:
        return float(np.prod(self.box_length))

    def axes(self) -> Tuple[np.ndarray, ...]:
        """One coordinate array per axis."""
        return tuple(
            -0.5 * length + h * np.arange(self.points_per_axis)
            for length, h in zip(self.box_length, self.spacing)
        )

    @cached_property
    def positions(self) -> np.ndarray:
        """Array of shape ``(*shape, dim)`` holding every grid point."""
        mesh = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack(mesh, axis=-1)

    @cached_property
    def wavevectors(self) -> Tuple[np.ndarray, ...]:
        """Angular wavenumbers per axis, broadcastable against the grid shape."""
        out = []
        for axis, (length, h) in enumerate(zip(self.box_length, self.spacing)):
            k = 2.0 * np.pi * np.fft.fftfreq(self.points_per_axis, d=h)
            shape = [1] * self.dim
            shape[axis] = self.points_per_axis
            out.append(k.reshape(shape))
        return tuple(out)

    @cached_property
    def k_squared(self) -> np.ndarray:
        """|k|^2 on the full grid."""
        total = np.zeros(self.shape)
        for k in self.wavevectors:
            total = total + k ** 2
        return total
