import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from spinorgp.core.grid import Grid
from spinorgp.core.spinor import LatticeOrbital, SpinorField
from spinorgp.protocol.levels import (
    ThreeLevelSpinor,
    blow,
    integrated,
    measure_down,
    measure_joint,
    measure_up,
    probe,
    pump,
    select_and_image,
)
from spinorgp.utils.errors import StructuralError

finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
component = arrays(np.float64, 6, elements=finite)


def make_spinor(u, v, w=None):
    return ThreeLevelSpinor(u, v, np.zeros_like(u) if w is None else w)


def test_single_operations():
    s = make_spinor(np.array([1.0, 2.0]), np.array([3.0, 4.0]), np.array([5.0, 6.0]))

    p = pump(s)
    assert np.allclose(p.u, 0.0) and np.allclose(p.v, [4.0, 6.0]) and np.allclose(p.w, [5.0, 6.0])
    b = blow(s)
    assert np.allclose(b.u, [1.0, 2.0]) and np.allclose(b.v, 0.0) and np.allclose(b.w, [5.0, 6.0])
    r = probe(s)
    assert np.allclose(r.u, [1.0, 2.0]) and np.allclose(r.v, 0.0) and np.allclose(r.w, [8.0, 10.0])
    assert np.allclose(select_and_image(s), [25.0, 36.0])


@settings(max_examples=50, deadline=None)
@given(component, component, component, component)
def test_chains_image_the_intended_profile(ur, ui, vr, vi):
    s = make_spinor(ur + 1j * ui, vr + 1j * vi)
    assert np.allclose(measure_up(s), np.abs(s.u) ** 2)
    assert np.allclose(measure_down(s), np.abs(s.v) ** 2)
    assert np.allclose(measure_joint(s), np.abs(s.u + s.v) ** 2)


def test_joint_image_adds_disjoint_profiles():
    u = np.array([1.0, 0.5, 0.0, 0.0])
    v = np.array([0.0, 0.0, 0.3j, 2.0])
    s = make_spinor(u, v)
    assert np.allclose(measure_joint(s), measure_up(s) + measure_down(s))


def test_operations_do_not_mutate_input():
    s = make_spinor(np.ones(3), 2 * np.ones(3))
    pump(s)
    blow(s)
    probe(s)
    assert np.allclose(s.u, 1.0) and np.allclose(s.v, 2.0) and np.allclose(s.w, 0.0)


def test_from_field_uses_cell_volume():
    grid = Grid.cube(1, 16, 8.0)
    profile = np.full(grid.shape, 1.0 / np.sqrt(grid.volume))
    s = ThreeLevelSpinor.from_field(SpinorField(grid, np.sqrt(0.3) * profile, np.sqrt(0.7) * profile))
    assert s.weight == grid.cell_volume
    assert np.allclose(s.level_norms2(), [0.3, 0.7, 0.0])
    assert abs(s.norm2() - 1.0) < 1e-12
    assert abs(integrated(measure_down(s), s.weight) - 0.7) < 1e-12


def test_from_lattice_orbital():
    orbital = LatticeOrbital(np.array([[0.6, 0.0], [0.0, 0.8]]))
    s = ThreeLevelSpinor.from_field(orbital)
    assert s.weight == 1.0
    assert np.allclose(s.level_norms2(), [0.36, 0.64, 0.0])


def test_pump_keeps_total_when_levels_are_disjoint():
    s = make_spinor(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    assert abs(pump(s).norm2() - s.norm2()) < 1e-14


def test_validation():
    with pytest.raises(StructuralError):
        ThreeLevelSpinor(np.ones(2), np.ones(3), np.ones(2))
    with pytest.raises(StructuralError):
        ThreeLevelSpinor(np.ones(2), np.ones(2), np.ones(2), weight=0.0)
