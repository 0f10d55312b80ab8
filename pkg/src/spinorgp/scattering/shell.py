"""
Shell construction around a rescaled potential.

For V_N = N^2 V(N r) with scattering length a_N, the attractive shell

    W_beta = 4 pi a_N N^{3 beta}   on   N^{-beta} < r < R_beta

is tuned by its outer radius R_beta until V_N - W_beta has zero scattering
length. Then f_beta (the zero-energy solution of V_N - W_beta) is constant
outside R_beta and g_beta = 1 - f_beta is supported inside it.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple
import warnings

import numpy as np
import pandas as pd
from loguru import logger
from scipy.integrate import IntegrationWarning, quad
from scipy.optimize import brentq

from spinorgp.scattering.radial import (
    RadialMesh,
    RadialPotential,
    ScatteringSolution,
    ShellProfile,
    rescale_potential,
    scattering_length,
)
from spinorgp.utils.errors import ConfigurationError, ConstructionError, ToleranceError

BRACKET_FACTOR = 10.0
WIDENED_FACTOR = 100.0
BRACKET_SAMPLES = 17
ROOT_RTOL = 1e-12
NORM_EXPONENTS = (1.0, 1.5, 2.0)


@dataclass
class ShellConstruction:
    """Result of tuning the shell for one (beta, N)."""

    beta: float
    n: int
    rescaled: RadialPotential
    a_n: float
    w_height: float
    inner_radius: float
    outer_radius: float
    f_n: ScatteringSolution
    f_beta: ScatteringSolution
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    @property
    def residual_length(self) -> float:
        """Scattering length of V_N - W_beta at the returned radius."""
        return self.f_beta.scattering_length

    def g_beta(self, r) -> np.ndarray:
        """1 - f_beta inside R_beta, zero outside."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        return np.where(r <= self.outer_radius, self.f_beta.g(r), 0.0)

    def envelope(self, r) -> np.ndarray:
        """a_N / r."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        with np.errstate(divide="ignore"):
            return self.a_n / r

    def lattice_samples(self, spacing: float, count: int) -> np.ndarray:
        """g_beta at separations 0, h, 2h, ... (nearest-node sampling)."""
        return self.g_beta(np.arange(count) * spacing)


def shell_potential(rescaled: RadialPotential, w_height: float, inner: float, outer: float) -> RadialPotential:
    return RadialPotential(
        ShellProfile(rescaled.profile, w_height, inner, outer),
        max(outer, rescaled.support_radius),
        nonneg=False,
        breakpoints=(*rescaled.breakpoints, rescaled.support_radius, inner),
        name=f"{rescaled.name}-shell",
    )


def _sign_changes(values: np.ndarray) -> List[int]:
    signs = np.sign(values)
    return [i for i in range(len(values) - 1) if signs[i] * signs[i + 1] < 0]


def build_shell(
    V: RadialPotential,
    beta: float,
    n: int,
    mesh: Optional[RadialMesh] = None,
) -> ShellConstruction:
    """
    Find R_beta: the smallest radius above N^{-beta} where V_N - W_beta has zero scattering length.

    Raises:
        ConfigurationError: beta outside (0, 1) or overlapping supports
        ConstructionError: no sign change in the bracket, even after widening once
    """
    if not 0 < beta < 1:
        raise ConfigurationError(f"beta must lie in (0, 1), got {beta}")
    if n < 1:
        raise ConfigurationError(f"particle number must be positive, got {n}")
    mesh = mesh or RadialMesh()

    rescaled = rescale_potential(V, n)
    f_n = scattering_length(rescaled, mesh)
    a_n = f_n.scattering_length
    inner = float(n) ** (-beta)
    if inner <= rescaled.support_radius:
        raise ConfigurationError(
            f"supports overlap: N^-beta = {inner:.3e} <= R_V / N = {rescaled.support_radius:.3e}"
        )
    if a_n <= 0:
        raise ConstructionError("rescaled potential has no positive scattering length", {"a_n": a_n})

    w_height = 4.0 * np.pi * a_n * float(n) ** (3 * beta)

    def residual(outer: float) -> float:
        if outer <= inner:
            return a_n
        return scattering_length(shell_potential(rescaled, w_height, inner, outer), mesh).scattering_length

    diagnostics: Dict[str, Any] = {"widened": False}
    bracket: Optional[Tuple[float, float]] = None
    for factor in (BRACKET_FACTOR, WIDENED_FACTOR):
        radii = np.linspace(inner, factor * inner, BRACKET_SAMPLES)
        values = np.array([residual(r) for r in radii])
        changes = _sign_changes(values)
        diagnostics.update(bracket=(inner, factor * inner), samples=values.tolist(), sign_changes=len(changes))
        if changes:
            if len(changes) > 1:
                logger.warning(f"{len(changes)} sign changes in the shell bracket at N = {n}; taking the first")
            first = changes[0]
            bracket = (radii[first], radii[first + 1])
            break
        if factor == BRACKET_FACTOR:
            logger.warning(f"no root in [N^-beta, {BRACKET_FACTOR:g} N^-beta] at N = {n}; widening once")
            diagnostics["widened"] = True

    if bracket is None:
        raise ConstructionError(
            f"no zero of the shell scattering length for beta = {beta}, N = {n}", diagnostics
        )

    outer = brentq(residual, *bracket, xtol=1e-16 * inner, rtol=ROOT_RTOL, maxiter=200)
    f_beta = scattering_length(shell_potential(rescaled, w_height, inner, outer), mesh)
    logger.debug(f"N = {n}: a_N = {a_n:.6e}, R_beta = {outer:.6e}, residual a' = {f_beta.scattering_length:.2e}")

    return ShellConstruction(
        beta=beta,
        n=n,
        rescaled=rescaled,
        a_n=a_n,
        w_height=w_height,
        inner_radius=inner,
        outer_radius=outer,
        f_n=f_n,
        f_beta=f_beta,
        diagnostics=diagnostics,
    )


def _radial_norm(integrand, edges: Sequence[float], p: float) -> float:
    total = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        for a, b in zip(edges[:-1], edges[1:]):
            if b <= a:
                continue
            try:
                value, _ = quad(integrand, a, b, epsabs=0.0, epsrel=1e-10, limit=400)
            except IntegrationWarning as exc:
                raise ToleranceError(f"quadrature of |g|^{p:g} on [{a:.3e}, {b:.3e}] did not converge: {exc}")
            total += value
    return total ** (1.0 / p)


def g_beta_norms(s: ShellConstruction) -> Tuple[float, float, float]:
    """(||g||_1, ||g||_{3/2}, ||g||_2) by radial quadrature with weight 4 pi r^2."""
    edges = [0.0, s.rescaled.support_radius, s.inner_radius, s.outer_radius]
    norms = []
    for p in NORM_EXPONENTS:
        norms.append(_radial_norm(
            lambda r, p=p: abs(float(s.f_beta.g(r)[0])) ** p * 4.0 * np.pi * r * r, edges, p
        ))
    return tuple(norms)


def envelope_norms(s: ShellConstruction) -> Tuple[float, float, float]:
    """Norms of a_N / r on [0, R_beta], in closed form."""
    a, big_r = s.a_n, s.outer_radius
    l1 = 2.0 * np.pi * a * big_r ** 2
    l32 = (4.0 * np.pi * a ** 1.5 * (2.0 / 3.0) * big_r ** 1.5) ** (2.0 / 3.0)
    l2 = np.sqrt(4.0 * np.pi * a ** 2 * big_r)
    return float(l1), float(l32), float(l2)


def fit_slope(x: Sequence[float], y: Sequence[float]) -> float:
    """Least-squares slope of log y against log x."""
    slope, _ = np.polyfit(np.log(np.asarray(x, dtype=float)), np.log(np.asarray(y, dtype=float)), 1)
    return float(slope)


def _sweep_row(V: RadialPotential, beta: float, n: int, mesh: Optional[RadialMesh]) -> Dict[str, float]:
    shell = build_shell(V, beta, n, mesh)
    l1, l32, l2 = g_beta_norms(shell)
    return {
        "N": n,
        "a_N": shell.a_n,
        "R_beta": shell.outer_radius,
        "g_L1": l1,
        "g_L32": l32,
        "g_L2": l2,
        "residual_a": shell.residual_length,
        "R_beta_scaled": shell.outer_radius * float(n) ** beta,
    }


def sweep_shell(
    V: RadialPotential,
    beta: float,
    n_list: Sequence[int],
    mesh: Optional[RadialMesh] = None,
    threads: int = 1,
) -> Tuple[pd.DataFrame, Dict[str, float]]:
    """
    Shell table over an N list and the fitted log-log slopes.

    Returns:
        (table ordered by N, {"slope_L1": ..., "slope_L32": ..., "slope_L2": ..., expected values})
    """
    n_list = sorted(int(n) for n in n_list)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        rows = list(pool.map(lambda n: _sweep_row(V, beta, n, mesh), n_list))
    table = pd.DataFrame(rows).sort_values("N").reset_index(drop=True)

    slopes: Dict[str, float] = {}
    if len(table) >= 2:
        for column, label in (("g_L1", "slope_L1"), ("g_L32", "slope_L32"), ("g_L2", "slope_L2")):
            slopes[label] = fit_slope(table["N"], table[column])
    slopes.update(
        expected_L1=-(1 + 2 * beta),
        expected_L32=-(1 + beta),
        expected_L2=-(1 + beta / 2),
    )
    logger.info(f"Shell sweep over N = {n_list}: slopes {slopes}")
    return table, slopes
