import numpy as np
import pytest
import scipy.linalg as la
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from spinorgp.core.linalg import (
    apply_2x2,
    hermitian_norm_2x2,
    hermiticity_defect,
    matexp_2x2,
    pauli_decompose,
    pauli_exp,
)
from spinorgp.utils.errors import ContractError

finite = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False, allow_infinity=False)


def make_hermitian(entries):
    a, d, re, im = entries
    return np.array([[a, re - 1j * im], [re + 1j * im, d]], dtype=complex)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, 4, elements=finite), st.floats(min_value=0.0, max_value=2.0))
def test_matexp_matches_scipy(entries, dt):
    m = make_hermitian(entries)
    assert np.allclose(matexp_2x2(m, dt), la.expm(-1j * dt * m), atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, 4, elements=finite), st.floats(min_value=0.0, max_value=2.0))
def test_matexp_is_unitary(entries, dt):
    u = matexp_2x2(make_hermitian(entries), dt)
    assert np.allclose(u.conj().T @ u, np.eye(2), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, 4, elements=finite), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_matexp_composes(entries, s, t):
    m = make_hermitian(entries)
    assert np.allclose(matexp_2x2(m, s) @ matexp_2x2(m, t), matexp_2x2(m, s + t), atol=1e-11)


def test_matexp_zero_coupling_is_pure_phase():
    m = np.diag([1.5, 1.5]).astype(complex)
    assert np.allclose(matexp_2x2(m, 0.3), np.exp(-0.45j) * np.eye(2))


def test_matexp_batches():
    rng = np.random.default_rng(3)
    raw = rng.normal(size=(5, 7, 2, 2)) + 1j * rng.normal(size=(5, 7, 2, 2))
    stack = 0.5 * (raw + np.conj(np.swapaxes(raw, -1, -2)))
    out = matexp_2x2(stack, 0.1)
    assert out.shape == stack.shape
    assert np.allclose(out[2, 3], la.expm(-0.1j * stack[2, 3]), atol=1e-12)


def test_matexp_rejects_non_hermitian():
    with pytest.raises(ContractError):
        matexp_2x2(np.array([[0.0, 1.0], [0.0, 0.0]]), 0.1)


def test_matexp_rejects_wrong_shape():
    with pytest.raises(ContractError):
        matexp_2x2(np.eye(3), 0.1)


def test_apply_and_defect():
    m = np.array([[[0, 1], [1, 0]]] * 3, dtype=complex)
    psi = np.array([[1, 0], [0, 1], [1, 1]], dtype=complex)
    assert np.allclose(apply_2x2(m, psi), psi[:, ::-1])
    assert hermiticity_defect(m) == 0.0


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, 4, elements=finite), st.floats(min_value=0.0, max_value=2.0))
def test_single_matrix_exponential_matches_batched(entries, dt):
    m = make_hermitian(entries)
    assert np.allclose(pauli_exp(*pauli_decompose(m), dt), matexp_2x2(m, dt), atol=1e-13)


def test_single_matrix_exponential_at_zero_vector():
    assert np.allclose(pauli_exp(0.7, 0.0, 0.0, 0.0, 0.5), np.exp(-0.35j) * np.eye(2))


def test_spectral_norm_closed_form():
    rng = np.random.default_rng(3)
    m = np.stack([make_hermitian(rng.uniform(-3, 3, 4)) for _ in range(10)])
    assert np.allclose(hermitian_norm_2x2(m), np.linalg.norm(m, ord=2, axis=(-2, -1)), atol=1e-12)


def test_apply_shared_matrix():
    u = la.expm(-0.3j * make_hermitian([0.1, -0.4, 0.5, 0.2]))
    psi = np.random.default_rng(0).standard_normal((6, 2)) + 0j
    assert np.allclose(apply_2x2(u, psi), apply_2x2(np.broadcast_to(u, (6, 2, 2)).copy(), psi))
