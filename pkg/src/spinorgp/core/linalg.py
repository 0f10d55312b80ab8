"""Pointwise 2x2 linear algebra for spin-coupled propagation."""

import cmath
import math

import numpy as np

from spinorgp.utils.errors import ContractError

HERMITIAN_TOLERANCE = 1e-12


def hermiticity_defect(m: np.ndarray) -> float:
    """max |M - M^dagger| over a stack of square matrices."""
    m = np.asarray(m)
    return float(np.max(np.abs(m - np.conj(np.swapaxes(m, -1, -2))), initial=0.0))


def pauli_decompose(m: np.ndarray):
    """
    Split Hermitian ``m`` (shape ``(..., 2, 2)``) as c0 I + c . sigma.

    Returns ``(c0, cx, cy, cz)`` arrays over the leading axes.
    """
    c0 = 0.5 * (m[..., 0, 0].real + m[..., 1, 1].real)
    cz = 0.5 * (m[..., 0, 0].real - m[..., 1, 1].real)
    cx = m[..., 0, 1].real
    cy = -m[..., 0, 1].imag
    return c0, cx, cy, cz


def matexp_2x2(m: np.ndarray, dt: float, check: bool = True) -> np.ndarray:
    """
    exp(-i M dt) for Hermitian 2x2 matrices, in closed form.

    ``m`` may carry leading batch axes; the result has the same shape.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape[-2:] != (2, 2):
        raise ContractError(f"expected 2x2 matrices, got shape {m.shape}")
    if check and hermiticity_defect(m) > HERMITIAN_TOLERANCE:
        raise ContractError(f"matrix is not Hermitian (defect {hermiticity_defect(m):.2e})")

    c0, cx, cy, cz = pauli_decompose(m)
    magnitude = np.sqrt(cx ** 2 + cy ** 2 + cz ** 2)
    cos_term = np.cos(magnitude * dt)
    # sin(|c| dt) / |c|, finite at |c| = 0
    sin_over = dt * np.sinc(magnitude * dt / np.pi)
    phase = np.exp(-1j * c0 * dt)

    out = np.empty(m.shape, dtype=complex)
    out[..., 0, 0] = phase * (cos_term - 1j * sin_over * cz)
    out[..., 1, 1] = phase * (cos_term + 1j * sin_over * cz)
    out[..., 0, 1] = phase * (-1j * sin_over * (cx - 1j * cy))
    out[..., 1, 0] = phase * (-1j * sin_over * (cx + 1j * cy))
    return out


def pauli_exp(c0: float, cx: float, cy: float, cz: float, dt: float) -> np.ndarray:
    """exp(-i (c0 I + c . sigma) dt) for one matrix given by its Pauli coefficients."""
    magnitude = math.sqrt(cx * cx + cy * cy + cz * cz)
    cos_term = math.cos(magnitude * dt)
    sin_over = math.sin(magnitude * dt) / magnitude if magnitude > 0.0 else dt
    phase = cmath.exp(-1j * c0 * dt)
    return np.array([
        [phase * (cos_term - 1j * sin_over * cz), phase * (-1j * sin_over * (cx - 1j * cy))],
        [phase * (-1j * sin_over * (cx + 1j * cy)), phase * (cos_term + 1j * sin_over * cz)],
    ])


def hermitian_norm_2x2(m: np.ndarray) -> np.ndarray:
    """Spectral norms |c0| + |c| of Hermitian 2x2 matrices over the leading axes."""
    c0, cx, cy, cz = pauli_decompose(np.asarray(m))
    return np.abs(c0) + np.sqrt(cx ** 2 + cy ** 2 + cz ** 2)


def apply_2x2(u_mat: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """
    Apply matrices to spinors ``(..., 2)``.

    ``u_mat`` is either pointwise ``(..., 2, 2)`` or a single ``(2, 2)`` shared by every point.
    """
    if u_mat.ndim == 2:
        return psi @ u_mat.T
    return np.matmul(u_mat, psi[..., None])[..., 0]
