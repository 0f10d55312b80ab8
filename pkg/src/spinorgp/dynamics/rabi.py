"""Closed-form two-photon Rabi rotation on resonance."""

from typing import Sequence

import numpy as np

from spinorgp.core.potentials import RabiParams
from spinorgp.core.spinor import SpinorField
from spinorgp.utils.errors import ContractError, UnsupportedCaseError


def rabi_reference(u0: SpinorField, rabi: RabiParams, t: float) -> SpinorField:
    """
    (e^{i w t/2} u0 cos(W t), -i e^{-i w t/2} u0 sin(W t)) for an all-up seed.

    Valid when spatial dynamics are negligible; only the resonant case has a
    closed form.
    """
    if not rabi.is_resonant:
        raise UnsupportedCaseError(
            f"closed form needs v_hf = omega/2; got v_hf = {rabi.v_hf_const}, omega = {rabi.omega_drive}"
        )
    if np.any(u0.v != 0):
        raise ContractError("Rabi reference expects the seed entirely in the upper level")

    w, big_w = rabi.omega_drive, rabi.omega_rabi
    u = np.exp(0.5j * w * t) * np.cos(big_w * t) * u0.u
    v = -1j * np.exp(-0.5j * w * t) * np.sin(big_w * t) * u0.u
    return SpinorField(u0.grid, u, v)


def population_law(rabi: RabiParams, times: Sequence[float]) -> np.ndarray:
    """(cos^2 W t, sin^2 W t) rows for each time."""
    phase = rabi.omega_rabi * np.asarray(times, dtype=float)
    return np.stack([np.cos(phase) ** 2, np.sin(phase) ** 2], axis=-1)
