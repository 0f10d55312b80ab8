"""
Krylov propagation of many-body states.

Each step applies exp(-i H(t_mid) dt) to the state with a Lanczos basis and
full re-orthogonalization; the exponential of the small tridiagonal matrix
is taken from its eigendecomposition. When the a posteriori error estimate
misses the tolerance at the maximal subspace size the step is split in half.
"""

from typing import Callable, Optional

import numpy as np
import scipy.linalg as la
from loguru import logger

from spinorgp.manybody.hamiltonian import HamiltonianAssembler
from spinorgp.manybody.model import LatticeModel
from spinorgp.manybody.states import ManyBodyState
from spinorgp.utils.errors import AccuracyError, ConfigurationError

KRYLOV_TOLERANCE = 1e-12
MAX_SUBSPACE = 40
MAX_HALVINGS = 8

StepCallback = Callable[[float, ManyBodyState], None]


def lanczos_expm(h, v: np.ndarray, dt: float, tol: float = KRYLOV_TOLERANCE, m_max: int = MAX_SUBSPACE):
    """
    Return (exp(-i h dt) v, error estimate).

    Raises:
        AccuracyError: if the estimate stays above ``tol * ||v||``
    """
    beta0 = np.linalg.norm(v)
    if beta0 == 0.0:
        return v.copy(), 0.0

    basis = [v / beta0]
    alphas = []
    betas = []
    error = np.inf
    for j in range(m_max):
        w = h @ basis[j]
        alphas.append(float(np.vdot(basis[j], w).real))
        w = w - alphas[j] * basis[j]
        if j > 0:
            w = w - betas[j - 1] * basis[j - 1]
        for q in basis:
            w = w - np.vdot(q, w) * q
        beta = float(np.linalg.norm(w))

        size = j + 1
        tri = np.diag(alphas) + np.diag(betas, 1) + np.diag(betas, -1)
        evals, evecs = la.eigh(tri)
        coeffs = evecs @ (np.exp(-1j * evals * dt) * evecs[0, :])
        error = beta * abs(coeffs[-1])

        if error <= tol or beta <= 1e-14 * max(1.0, abs(alphas[j])):
            stack = np.stack(basis[:size], axis=1)
            return beta0 * (stack @ coeffs), beta0 * error
        betas.append(beta)
        basis.append(w / beta)

    raise AccuracyError(
        f"Lanczos exponential missed tolerance {tol:g} with {m_max} vectors",
        residual=float(beta0 * error),
    )


def krylov_step(h, v: np.ndarray, dt: float, tol: float = KRYLOV_TOLERANCE, depth: int = 0) -> np.ndarray:
    try:
        out, _ = lanczos_expm(h, v, dt, tol)
        return out
    except AccuracyError:
        if depth >= MAX_HALVINGS:
            raise
        logger.debug(f"Splitting Krylov step dt = {dt:g}")
        half = krylov_step(h, v, 0.5 * dt, tol, depth + 1)
        return krylov_step(h, half, 0.5 * dt, tol, depth + 1)


def propagate(
    psi: ManyBodyState,
    model: LatticeModel,
    t0: float,
    t1: float,
    dt: float,
    callback: Optional[StepCallback] = None,
    assembler: Optional[HamiltonianAssembler] = None,
    tol: float = KRYLOV_TOLERANCE,
) -> ManyBodyState:
    """
    Advance ``psi`` from t0 to t1 with midpoint-sampled H.

    The step is shortened uniformly so an integer number of steps lands on t1.
    ``callback(t, state)`` runs after every step.
    """
    psi.require_normalized()
    if dt <= 0:
        raise ConfigurationError("dt must be positive")
    if t1 < t0:
        raise ConfigurationError("propagation runs forward in time only")
    if t1 == t0:
        return psi

    assembler = assembler or HamiltonianAssembler(model, psi.basis)
    n_steps = max(1, int(np.ceil((t1 - t0) / dt - 1e-12)))
    h_step = (t1 - t0) / n_steps

    v = psi.amplitudes
    for index in range(n_steps):
        t_mid = t0 + (index + 0.5) * h_step
        v = krylov_step(assembler.at(t_mid), v, h_step, tol)
        if not np.all(np.isfinite(v)):
            raise AccuracyError(f"non-finite amplitudes after step {index}", residual=float("inf"))
        if callback is not None:
            callback(t0 + (index + 1) * h_step, ManyBodyState(psi.basis, v))

    drift = abs(np.linalg.norm(v) - 1.0)
    logger.debug(f"Propagated {n_steps} steps to t = {t1:g}, norm drift {drift:.2e}")
    return ManyBodyState(psi.basis, v)
