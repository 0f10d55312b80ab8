"""
Binary snapshot dumps.

Layout, all little-endian:

    b"SPGP"                     magic
    uint32                      format version
    uint32                      kind (1 spinor field, 2 many-body amplitudes, 3 density matrix)
    uint32                      ndim
    uint32 * ndim               shape per axis
    float64 * ndim              box length per axis (spinor fields only)
    uint32                      record count
    records:
        float64                 time
        complex128 * size       interleaved (re, im) pairs, C order

A spinor record holds u then v over the grid, so its size is 2 * prod(shape).
"""

from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from spinorgp.core.grid import Grid
from spinorgp.core.spinor import SpinorField
from spinorgp.manybody.density import OneBodyDensityMatrix
from spinorgp.manybody.states import ManyBodyState
from spinorgp.utils.errors import StructuralError

MAGIC = b"SPGP"
FORMAT_VERSION = 1

_U32 = np.dtype("<u4")
_F64 = np.dtype("<f8")
_C128 = np.dtype("<c16")


class SnapshotKind(IntEnum):
    SPINOR = 1
    MANYBODY = 2
    DENSITY = 3


@dataclass(eq=False)
class SnapshotFile:
    """Decoded contents of a dump."""

    kind: SnapshotKind
    shape: Tuple[int, ...]
    lengths: Optional[Tuple[float, ...]]
    times: np.ndarray
    records: np.ndarray

    def __len__(self) -> int:
        return len(self.times)

    def spinor(self, index: int) -> SpinorField:
        """Rebuild the spinor field of record ``index``."""
        if self.kind != SnapshotKind.SPINOR:
            raise StructuralError(f"record kind is {self.kind.name}, not a spinor field")
        grid = Grid(len(self.shape), self.shape[0], self.lengths)
        return SpinorField(grid, self.records[index][0], self.records[index][1])


def _record_shape(kind: SnapshotKind, shape: Tuple[int, ...]) -> Tuple[int, ...]:
    return (2, *shape) if kind == SnapshotKind.SPINOR else shape


def write_snapshots(
    path: Union[str, Path],
    kind: SnapshotKind,
    times: Sequence[float],
    records: Sequence[np.ndarray],
    lengths: Optional[Sequence[float]] = None,
) -> Path:
    """
    Write equally shaped complex records.

    For spinor fields each record is the stacked (2, *grid shape) array and
    ``lengths`` gives the box.
    """
    kind = SnapshotKind(kind)
    if len(times) != len(records):
        raise StructuralError(f"{len(times)} times for {len(records)} records")
    if not records:
        raise StructuralError("nothing to write")
    stacked = np.stack([np.asarray(r, dtype=complex) for r in records])
    shape = stacked.shape[2:] if kind == SnapshotKind.SPINOR else stacked.shape[1:]
    if kind == SnapshotKind.SPINOR:
        if stacked.shape[1] != 2:
            raise StructuralError("spinor records must stack u and v along the first axis")
        if lengths is None or len(lengths) != len(shape):
            raise StructuralError("spinor dumps need one box length per axis")

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(np.array([FORMAT_VERSION, int(kind), len(shape), *shape], dtype=_U32).tobytes())
        if kind == SnapshotKind.SPINOR:
            f.write(np.asarray(lengths, dtype=_F64).tobytes())
        f.write(np.array([len(records)], dtype=_U32).tobytes())
        for t, record in zip(times, stacked):
            f.write(np.array([t], dtype=_F64).tobytes())
            f.write(np.ascontiguousarray(record, dtype=_C128).tobytes())
    logger.info(f"Wrote {len(records)} {kind.name.lower()} snapshots to: {path}")
    return path


def read_snapshots(path: Union[str, Path]) -> SnapshotFile:
    raw = Path(path).read_bytes()
    if raw[:4] != MAGIC:
        raise StructuralError(f"{path} is not a snapshot dump")
    offset = 4

    def take(dtype: np.dtype, count: int) -> np.ndarray:
        nonlocal offset
        values = np.frombuffer(raw, dtype=dtype, count=count, offset=offset)
        offset += dtype.itemsize * count
        return values

    version, kind_value, ndim = (int(v) for v in take(_U32, 3))
    if version != FORMAT_VERSION:
        raise StructuralError(f"unsupported snapshot format version {version}")
    kind = SnapshotKind(kind_value)
    shape = tuple(int(v) for v in take(_U32, ndim))
    lengths = tuple(float(v) for v in take(_F64, ndim)) if kind == SnapshotKind.SPINOR else None
    count = int(take(_U32, 1)[0])

    record_shape = _record_shape(kind, shape)
    size = int(np.prod(record_shape))
    times: List[float] = []
    records: List[np.ndarray] = []
    for _ in range(count):
        times.append(float(take(_F64, 1)[0]))
        records.append(take(_C128, size).reshape(record_shape).astype(complex))
    if offset != len(raw):
        raise StructuralError(f"{len(raw) - offset} trailing bytes in {path}")
    return SnapshotFile(kind, shape, lengths, np.array(times), np.array(records))


def dump_spinor_trajectory(path: Union[str, Path], times: Sequence[float], fields: Sequence[SpinorField]) -> Path:
    grid = fields[0].grid
    records = [np.stack([f.u, f.v]) for f in fields]
    return write_snapshots(path, SnapshotKind.SPINOR, times, records, grid.box_length)


def dump_manybody(path: Union[str, Path], times: Sequence[float], states: Sequence[ManyBodyState]) -> Path:
    return write_snapshots(path, SnapshotKind.MANYBODY, times, [s.amplitudes for s in states])


def dump_density_matrices(
    path: Union[str, Path], times: Sequence[float], gammas: Sequence[OneBodyDensityMatrix]
) -> Path:
    return write_snapshots(path, SnapshotKind.DENSITY, times, [g.matrix for g in gammas])
