"""Tests for the two-slot expansion."""

import numpy as np
import pytest

from spinorgp.counting.two_slot import TwoSlotSpace
from spinorgp.manybody.basis import build_basis
from spinorgp.manybody.states import random_state
from spinorgp.utils.errors import SizeError, StructuralError


def test_embedding_is_an_isometry():
    basis = build_basis(3, 3)
    space = TwoSlotSpace(basis)
    psi = random_state(basis, np.random.default_rng(4))
    x = space.embed(psi)
    assert x.shape == (6, 6, 6)
    assert np.linalg.norm(x) == pytest.approx(1.0, abs=1e-12)


def test_project_inverts_embed():
    basis = build_basis(2, 4)
    space = TwoSlotSpace(basis)
    psi = random_state(basis, np.random.default_rng(5))
    back = space.project(space.embed(psi))
    assert np.allclose(back.amplitudes, psi.amplitudes, atol=1e-12)


def test_cap_defaults_to_lab_settings(isolated_settings):
    isolated_settings.limits.expansion_cap = 100
    with pytest.raises(SizeError) as info:
        TwoSlotSpace(build_basis(3, 3))
    assert info.value.required == 216
    assert info.value.cap == 100


def test_explicit_cap_wins(isolated_settings):
    isolated_settings.limits.expansion_cap = 100
    assert TwoSlotSpace(build_basis(3, 3), cap=1000).cap == 1000


def test_needs_two_particles():
    with pytest.raises(StructuralError):
        TwoSlotSpace(build_basis(2, 1))


def test_embed_rejects_foreign_state():
    space = TwoSlotSpace(build_basis(2, 3))
    other = random_state(build_basis(3, 3), np.random.default_rng(0))
    with pytest.raises(StructuralError):
        space.embed(other)
