"""
Convergence indicators along a many-body trajectory.

    alpha_tilde = 1 - <phi, gamma phi>                       (= <n^2>)
    alpha_less  = <m> + |E_N - E_eff|
    alpha       = alpha_less - N (N - 1) Re <psi, g(x_1 - x_2) R_12 psi>
    delta_a     = Tr(gamma dS/dt) - <phi, dS/dt phi>
"""

from dataclasses import asdict, dataclass
from typing import Dict, Optional, Union

import numpy as np

from spinorgp.core.spinor import LatticeOrbital
from spinorgp.counting.operators import CountingOperator, build_m_variants
from spinorgp.counting.projector import CondensateProjector
from spinorgp.counting.two_slot import TwoSlotSpace
from spinorgp.counting.weights import DEFAULT_XI, WeightFunction
from spinorgp.manybody.density import OneBodyDensityMatrix, partial_trace
from spinorgp.manybody.hamiltonian import HamiltonianAssembler, energy_per_particle
from spinorgp.manybody.model import LatticeModel, block_diagonal, ring_separations
from spinorgp.manybody.states import ManyBodyState
from spinorgp.scattering.shell import ShellConstruction

PairProfile = Union[np.ndarray, ShellConstruction]


def alpha_tilde(psi: ManyBodyState, orbital: LatticeOrbital) -> float:
    """1 - <phi, gamma^(1) phi>."""
    orbital.require_normalized()
    return float(1.0 - partial_trace(psi).overlap(orbital))


def n_squared_expectation(psi: ManyBodyState, orbital: LatticeOrbital) -> float:
    """<psi, n^2 psi> = (1/N) sum_k k ||P_k psi||^2."""
    proj = CondensateProjector(orbital, psi.n_particles)
    return proj.q_count(psi) / psi.n_particles


def alpha_less(
    psi: ManyBodyState,
    orbital: LatticeOrbital,
    model: LatticeModel,
    gp_energy_value: float,
    xi: float = DEFAULT_XI,
    t: float = 0.0,
    assembler: Optional[HamiltonianAssembler] = None,
) -> float:
    m_hat = CountingOperator.from_weight(
        WeightFunction.m_weight(psi.n_particles, xi), CondensateProjector(orbital, psi.n_particles)
    )
    gap = abs(energy_per_particle(psi, model, t, assembler) - gp_energy_value)
    return m_hat.expectation(psi) + gap


def lattice_pair_profile(g: PairProfile, model: LatticeModel) -> np.ndarray:
    """Ring-separation samples of g; a shell is sampled at the nearest lattice nodes."""
    if isinstance(g, ShellConstruction):
        return g.lattice_samples(model.spacing, model.sites // 2 + 1)
    return np.asarray(g, dtype=float)


def r12_correction(
    psi: ManyBodyState,
    orbital: LatticeOrbital,
    g_profile: np.ndarray,
    xi: float = DEFAULT_XI,
    space: Optional[TwoSlotSpace] = None,
) -> complex:
    """N (N - 1) <psi, g(x_1 - x_2) R_12 psi>, complex."""
    n = psi.n_particles
    space = space or TwoSlotSpace(psi.basis)
    proj = CondensateProjector(orbital, n)
    x = space.embed(psi)
    y = space.pair(g_profile, space.r12(proj, WeightFunction.m_weight(n, xi), x))
    return n * (n - 1) * complex(np.vdot(x, y))


def _site_matrix(g_profile: np.ndarray, sites: int) -> np.ndarray:
    profile = np.asarray(g_profile, dtype=float)
    needed = sites // 2 + 1
    if profile.size < needed:
        profile = np.concatenate([profile, np.zeros(needed - profile.size)])
    return profile[ring_separations(sites)]


def dressed_norm(g_profile: np.ndarray, orbital: LatticeOrbital) -> float:
    """||g(x_1 - x_2) p_2||_op = sqrt(max_x sum_y g(x - y)^2 rho(y))."""
    g2 = _site_matrix(g_profile, orbital.sites) ** 2
    return float(np.sqrt(np.max(g2 @ orbital.density())))


def dressed_norm_bound(g_profile: np.ndarray, orbital: LatticeOrbital) -> float:
    """||g||_2 * sqrt(||u||_inf^2 + ||v||_inf^2), ring multiplicity included."""
    g_l2 = np.sqrt(np.sum(_site_matrix(g_profile, orbital.sites)[0] ** 2))
    sup = np.max(np.abs(orbital.u)) ** 2 + np.max(np.abs(orbital.v)) ** 2
    return float(g_l2 * np.sqrt(sup))


@dataclass
class IndicatorReport:
    """Indicators at one time, with the sandwich and gap bounds."""

    alpha_tilde: float
    n_expectation: float
    m_expectation: float
    energy_gap: float
    alpha_less: float
    correction: float
    alpha: float
    gap_bound: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def alpha_full(
    psi: ManyBodyState,
    orbital: LatticeOrbital,
    model: LatticeModel,
    gp_energy_value: float,
    xi: float,
    shell: PairProfile,
    t: float = 0.0,
    space: Optional[TwoSlotSpace] = None,
) -> IndicatorReport:
    """All three indicators and the bound on |alpha - alpha_less|."""
    n = psi.n_particles
    proj = CondensateProjector(orbital, n)
    weight_m = WeightFunction.m_weight(n, xi)
    m_hat = CountingOperator.from_weight(weight_m, proj)
    n_hat = CountingOperator.from_weight(WeightFunction.n_weight(n), proj)

    tilde = alpha_tilde(psi, orbital)
    gap = abs(energy_per_particle(psi, model, t) - gp_energy_value)
    m_value = m_hat.expectation(psi)
    less = m_value + gap

    g_profile = lattice_pair_profile(shell, model)
    correction = r12_correction(psi, orbital, g_profile, xi, space).real
    variants = build_m_variants(weight_m, proj)
    g_norm = dressed_norm(g_profile, orbital)
    bound = n * n * 2.0 * g_norm * (variants["a"].operator_norm() + variants["b"].operator_norm())

    return IndicatorReport(
        alpha_tilde=tilde,
        n_expectation=n_hat.expectation(psi),
        m_expectation=m_value,
        energy_gap=gap,
        alpha_less=less,
        correction=correction,
        alpha=less - correction,
        gap_bound=bound,
    )


def delta_a(psi: ManyBodyState, orbital: LatticeOrbital, s_dot: np.ndarray,
            gamma: Optional[OneBodyDensityMatrix] = None) -> float:
    """<psi, dS/dt(x_1) psi> - <phi, dS/dt phi> for per-site (d, 2, 2) blocks."""
    s_dot = np.asarray(s_dot)
    if not np.any(s_dot):
        return 0.0
    if gamma is None:
        gamma = partial_trace(psi)
    one_body = block_diagonal(s_dot)
    phi = orbital.vector
    return gamma.expectation(one_body) - float(np.vdot(phi, one_body @ phi).real)
