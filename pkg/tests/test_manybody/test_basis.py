from math import comb

import numpy as np
import pytest

from spinorgp.manybody.basis import (
    annihilation,
    build_basis,
    build_mode_basis,
    one_body_operator,
)
from spinorgp.utils.errors import SizeError, StructuralError


def test_dimension_matches_binomial():
    basis = build_basis(2, 3)
    assert basis.n_modes == 4
    assert basis.dimension == comb(6, 3)
    assert np.all(basis.occupations.sum(axis=1) == 3)


def test_index_map_is_a_bijection():
    basis = build_basis(3, 3)
    idx = basis.index_of(basis.occupations)
    assert np.array_equal(idx, np.arange(basis.dimension))
    assert np.all(np.diff(basis.keys) > 0)


def test_unknown_occupation_is_rejected():
    basis = build_basis(2, 2)
    with pytest.raises(StructuralError):
        basis.index_of(np.array([1, 1, 1, 0]))


def test_cap_is_enforced():
    with pytest.raises(SizeError) as info:
        build_basis(8, 20, cap=1000)
    assert info.value.cap == 1000
    assert info.value.required == comb(16 + 20 - 1, 20)


def test_site_occupations_sum_spins():
    basis = build_basis(2, 2)
    per_site = basis.site_occupations()
    assert per_site.shape == (basis.dimension, 2)
    assert np.all(per_site.sum(axis=1) == 2)


def test_hop_adjoint_and_number_operator():
    basis = build_basis(2, 3)
    forward = basis.hop(0, 3).toarray()
    backward = basis.hop(3, 0).toarray()
    assert np.allclose(forward.conj().T, backward)

    number = sum(basis.hop(a, a) for a in range(basis.n_modes)).toarray()
    assert np.allclose(number, 3 * np.eye(basis.dimension))
    assert basis.hop(0, 3) is basis.hop(0, 3)


def test_one_body_operator_is_hermitian():
    rng = np.random.default_rng(3)
    basis = build_basis(2, 3)
    raw = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    h = one_body_operator(basis, raw + raw.conj().T).toarray()
    assert np.allclose(h, h.conj().T)


def test_one_body_operator_shape_check():
    basis = build_basis(2, 2)
    with pytest.raises(StructuralError):
        one_body_operator(basis, np.eye(3))


def test_annihilation_adjoint_commutator():
    upper = build_mode_basis(3, 2)
    lower = build_mode_basis(3, 1)
    a0 = annihilation(upper, lower, 0).toarray()
    a1 = annihilation(upper, lower, 1).toarray()
    # a_0^dagger a_1 on N particles equals hop(0, 1)
    assert np.allclose(a0.conj().T @ a1, upper.hop(0, 1).toarray())


def test_annihilation_needs_adjacent_particle_numbers():
    with pytest.raises(StructuralError):
        annihilation(build_mode_basis(3, 3), build_mode_basis(3, 1), 0)
