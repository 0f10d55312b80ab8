import numpy as np
import pytest

from spinorgp.core.grid import Grid
from spinorgp.core.spinor import SpinorField
from spinorgp.data.snapshots import (
    MAGIC,
    SnapshotKind,
    dump_density_matrices,
    dump_manybody,
    dump_spinor_trajectory,
    read_snapshots,
    write_snapshots,
)
from spinorgp.manybody.basis import build_basis
from spinorgp.manybody.density import partial_trace
from spinorgp.manybody.states import random_state
from spinorgp.utils.errors import StructuralError


def make_fields(n=3):
    rng = np.random.default_rng(0)
    grid = Grid.cube(2, 4, 6.0)
    return grid, [
        SpinorField(grid, rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape),
                    rng.standard_normal(grid.shape))
        for _ in range(n)
    ]


def test_spinor_dump_layout(tmp_path):
    grid, fields = make_fields()
    path = dump_spinor_trajectory(tmp_path / "run.spgp", [0.0, 0.1, 0.2], fields)
    raw = path.read_bytes()
    assert raw[:4] == MAGIC
    header = np.frombuffer(raw, dtype="<u4", count=5, offset=4)
    assert list(header) == [1, int(SnapshotKind.SPINOR), 2, 4, 4]
    # header, lengths, count, then per record a time and 2 * 16 complex values
    assert len(raw) == 4 + 5 * 4 + 2 * 8 + 4 + 3 * (8 + 2 * 16 * 16)


def test_spinor_dump_reads_back(tmp_path):
    grid, fields = make_fields()
    dump = read_snapshots(dump_spinor_trajectory(tmp_path / "run.spgp", [0.0, 0.1, 0.2], fields))
    assert dump.kind == SnapshotKind.SPINOR
    assert len(dump) == 3
    assert dump.lengths == (6.0, 6.0)
    assert np.allclose(dump.times, [0.0, 0.1, 0.2])
    back = dump.spinor(2)
    assert back.grid.shape == grid.shape
    assert np.array_equal(back.u, fields[2].u)
    assert np.array_equal(back.v, fields[2].v)


def test_manybody_and_density_dumps(tmp_path):
    rng = np.random.default_rng(1)
    states = [random_state(build_basis(2, 2), rng) for _ in range(2)]
    dump = read_snapshots(dump_manybody(tmp_path / "psi.spgp", [0.0, 1.0], states))
    assert dump.kind == SnapshotKind.MANYBODY
    assert dump.lengths is None
    assert np.array_equal(dump.records[1], states[1].amplitudes)

    gammas = [partial_trace(s) for s in states]
    dump = read_snapshots(dump_density_matrices(tmp_path / "gamma.spgp", [0.0, 1.0], gammas))
    assert dump.shape == (4, 4)
    assert np.array_equal(dump.records[0], gammas[0].matrix)
    with pytest.raises(StructuralError):
        dump.spinor(0)


def test_write_rejects_bad_input(tmp_path):
    with pytest.raises(StructuralError):
        write_snapshots(tmp_path / "x.spgp", SnapshotKind.MANYBODY, [0.0, 1.0], [np.zeros(3)])
    with pytest.raises(StructuralError):
        write_snapshots(tmp_path / "x.spgp", SnapshotKind.MANYBODY, [], [])
    with pytest.raises(StructuralError):
        write_snapshots(tmp_path / "x.spgp", SnapshotKind.SPINOR, [0.0], [np.zeros((2, 4))])


def test_read_rejects_foreign_and_truncated_files(tmp_path):
    foreign = tmp_path / "foreign.spgp"
    foreign.write_bytes(b"NOPE" + bytes(16))
    with pytest.raises(StructuralError):
        read_snapshots(foreign)

    path = dump_manybody(tmp_path / "psi.spgp", [0.0], [random_state(build_basis(2, 1), np.random.default_rng(0))])
    path.write_bytes(path.read_bytes() + b"\x00")
    with pytest.raises(StructuralError):
        read_snapshots(path)
