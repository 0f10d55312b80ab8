"""
Zero-energy two-body scattering in three dimensions.

For a radial potential V the s-wave solution of (-Delta + V/2) f = 0 is found
through w = r f, which solves w'' = V w / 2 with w(0) = 0. Outside the support
w is exactly linear, w = c (r - a); the slope fixes the normalization f -> 1
and the intercept gives the scattering length a.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy.integrate import quad, solve_ivp

from spinorgp.utils.errors import AccuracyError, ConfigurationError, ContractError

Profile = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SquareWellProfile:
    height: float
    radius: float

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return np.where(r < self.radius, self.height, 0.0)


@dataclass(frozen=True)
class SoftCapProfile:
    """height * (1 - r^2 / radius^2) inside the radius."""

    height: float
    radius: float

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return np.where(r < self.radius, self.height * (1.0 - (r / self.radius) ** 2), 0.0)


@dataclass(frozen=True)
class ScaledProfile:
    """r -> prefactor * base(stretch * r)."""

    base: Profile
    prefactor: float
    stretch: float

    def __call__(self, r):
        return self.prefactor * self.base(self.stretch * np.asarray(r, dtype=float))


@dataclass(frozen=True)
class ShellProfile:
    """inner(r) minus a constant well of height w_height on inner_radius < r < outer_radius."""

    inner: Profile
    w_height: float
    inner_radius: float
    outer_radius: float

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        well = np.where((r > self.inner_radius) & (r < self.outer_radius), self.w_height, 0.0)
        return self.inner(r) - well


@dataclass(frozen=True)
class RadialPotential:
    """
    Compactly supported radial potential.

    ``breakpoints`` lists radii where the profile may be non-smooth; the
    solver restarts integration at each of them.
    """

    profile: Profile
    support_radius: float
    nonneg: bool = True
    breakpoints: Tuple[float, ...] = ()
    name: str = "custom"

    def __post_init__(self):
        if not np.isfinite(self.support_radius) or self.support_radius <= 0:
            raise ConfigurationError("support radius must be positive")
        if self.nonneg:
            sample = np.asarray(self.profile(np.linspace(0.0, self.support_radius, 2001)))
            if np.any(sample < 0):
                raise ConfigurationError(f"potential '{self.name}' is flagged nonneg but takes negative values")
        points = sorted({float(b) for b in self.breakpoints if 0 < b < self.support_radius})
        object.__setattr__(self, "breakpoints", tuple(points))

    @classmethod
    def square_well(cls, height: float, radius: float) -> "RadialPotential":
        return cls(SquareWellProfile(height, radius), radius, nonneg=height >= 0, name="square_well")

    @classmethod
    def soft_cap(cls, height: float, radius: float) -> "RadialPotential":
        return cls(SoftCapProfile(height, radius), radius, nonneg=height >= 0, name="soft_cap")

    @classmethod
    def zero(cls, radius: float = 1.0) -> "RadialPotential":
        return cls.square_well(0.0, radius)

    def __call__(self, r):
        return self.profile(r)

    def sup(self, samples: int = 4001) -> float:
        r = np.linspace(0.0, self.support_radius, samples)
        return float(np.max(np.abs(self.profile(r))))

    def segments(self, r_max: float) -> List[Tuple[float, float]]:
        edges = [0.0, *self.breakpoints, self.support_radius, r_max]
        return [(a, b) for a, b in zip(edges[:-1], edges[1:]) if b > a]


@dataclass(frozen=True)
class RadialMesh:
    """Solver settings for the radial problem."""

    rtol: float = 1e-12
    atol_scale: float = 1e-14
    exterior_factor: float = 4.0
    points_per_segment: int = 200
    method: str = "DOP853"


@dataclass
class ScatteringSolution:
    """Zero-energy solution f = w / (c r) normalized to 1 at infinity."""

    r_grid: np.ndarray
    f_values: np.ndarray
    scattering_length: float
    slope: float
    fit_residual: float
    node_count: int
    integral_length: float
    potential: RadialPotential
    _segments: List[Tuple[float, float, object]] = field(default_factory=list, repr=False)

    @property
    def r_max(self) -> float:
        return float(self.r_grid[-1])

    def w(self, r) -> np.ndarray:
        """Unnormalized radial function and derivative, shape (2, len(r))."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.empty((2, r.size))
        ends = np.array([b for _, b, _ in self._segments])
        which = np.minimum(np.searchsorted(ends, r), len(self._segments) - 1)
        for k, (_, _, sol) in enumerate(self._segments):
            mask = which == k
            if np.any(mask):
                out[:, mask] = sol(r[mask])
        beyond = r > self.r_max
        if np.any(beyond):
            w_end, dw_end = self._segments[-1][2](self.r_max)
            out[0, beyond] = w_end + dw_end * (r[beyond] - self.r_max)
            out[1, beyond] = dw_end
        return out

    def evaluate(self, r) -> np.ndarray:
        """f(r); at r = 0 the limit w'(0) / c."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        w, dw = self.w(r)
        with np.errstate(divide="ignore", invalid="ignore"):
            f = np.where(r > 0, w / (self.slope * np.where(r > 0, r, 1.0)), dw / self.slope)
        return f

    def g(self, r) -> np.ndarray:
        return 1.0 - self.evaluate(r)

    def ode_residual(self, step: float = 1e-6) -> float:
        """max |w'' - V w / 2| on interior mesh points, relative to the slope."""
        r = self.r_grid[(self.r_grid > step) & (self.r_grid < self.r_max - step)]
        edges = np.array([0.0, *self.potential.breakpoints, self.potential.support_radius])
        keep = np.min(np.abs(r[:, None] - edges[None, :]), axis=1) > 10 * step
        r = r[keep]
        _, dw_plus = self.w(r + step)
        _, dw_minus = self.w(r - step)
        w_here, _ = self.w(r)
        second = (dw_plus - dw_minus) / (2 * step)
        return float(np.max(np.abs(second - 0.5 * self.potential(r) * w_here), initial=0.0) / abs(self.slope))


def _rhs(potential: RadialPotential):
    def rhs(r, y):
        return np.array([y[1], 0.5 * float(potential(r)) * y[0]])
    return rhs


def scattering_length(V: RadialPotential, mesh: Optional[RadialMesh] = None) -> ScatteringSolution:
    """Integrate outward from w(0) = 0, w'(0) = 1 and fit the exterior line."""
    mesh = mesh or RadialMesh()
    r_max = mesh.exterior_factor * V.support_radius
    rhs = _rhs(V)

    y = np.array([0.0, 1.0])
    segments = []
    grids = []
    for a, b in V.segments(r_max):
        atol = np.array([mesh.atol_scale * b, mesh.atol_scale])
        sol = solve_ivp(
            rhs, (a, b), y, method=mesh.method, rtol=mesh.rtol, atol=atol, dense_output=True
        )
        if not sol.success:
            raise AccuracyError(f"radial integration failed on [{a:g}, {b:g}]: {sol.message}", residual=np.inf)
        segments.append((a, b, sol.sol))
        grids.append(np.linspace(a, b, mesh.points_per_segment, endpoint=False))
        y = sol.y[:, -1]
    r_grid = np.concatenate([*grids, [r_max]])

    solution = ScatteringSolution(
        r_grid=r_grid,
        f_values=np.empty(0),
        scattering_length=np.nan,
        slope=1.0,
        fit_residual=np.nan,
        node_count=0,
        integral_length=np.nan,
        potential=V,
        _segments=segments,
    )
    w_grid, _ = solution.w(r_grid)

    exterior = r_grid >= V.support_radius
    slope, intercept = np.polyfit(r_grid[exterior], w_grid[exterior], 1)
    if slope == 0:
        raise ContractError("exterior solution has zero slope; normalization at infinity impossible")
    residual = float(np.max(np.abs(w_grid[exterior] - (slope * r_grid[exterior] + intercept))) / abs(slope))
    if residual > 1e-10 * max(1.0, r_max):
        logger.warning(f"exterior linear fit residual {residual:.2e} above 1e-10")

    a = -intercept / slope
    interior = w_grid[1:]
    nodes = int(np.count_nonzero(np.sign(interior[1:]) * np.sign(interior[:-1]) < 0))
    if nodes:
        logger.warning(f"zero-energy solution of '{V.name}' has {nodes} node(s): bound states present")

    solution.slope = float(slope)
    solution.scattering_length = float(a)
    solution.fit_residual = residual
    solution.node_count = nodes
    solution.f_values = solution.evaluate(r_grid)
    solution.integral_length = _integral_length(solution)
    return solution


def _integral_length(solution: ScatteringSolution) -> float:
    """(1/8 pi) int V f d^3x = (1/2) int_0^R V w r dr / c."""
    V = solution.potential
    edges = [0.0, *V.breakpoints, V.support_radius]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        value, _ = quad(
            lambda r: float(V(r)) * float(solution.w(r)[0, 0]) * r,
            a, b, epsabs=0.0, epsrel=1e-11, limit=200,
        )
        total += value
    return 0.5 * total / solution.slope


def rescale_potential(V: RadialPotential, n: float, gamma: float = 1.0) -> RadialPotential:
    """
    r -> n^{3 gamma - 1} V(n^gamma r); gamma = 1 gives n^2 V(n r).

    Support and breakpoints shrink by n^gamma.
    """
    if n < 1:
        raise ConfigurationError(f"rescaling needs n >= 1, got {n}")
    if not 0 < gamma <= 1:
        raise ConfigurationError(f"gamma must lie in (0, 1], got {gamma}")
    if n == 1:
        return V
    stretch = float(n) ** gamma
    prefactor = float(n) ** (3 * gamma - 1)
    return RadialPotential(
        ScaledProfile(V.profile, prefactor, stretch),
        V.support_radius / stretch,
        nonneg=V.nonneg,
        breakpoints=tuple(b / stretch for b in V.breakpoints),
        name=f"{V.name}@{n:g}",
    )


def square_well_length(height: float, radius: float) -> float:
    """Closed form R - tanh(kappa R) / kappa, kappa = sqrt(V0 / 2)."""
    if height == 0:
        return 0.0
    kappa = np.sqrt(0.5 * height)
    return float(radius - np.tanh(kappa * radius) / kappa)


def sample_solution(solution: ScatteringSolution, radii: Sequence[float]) -> np.ndarray:
    return solution.evaluate(np.asarray(radii, dtype=float))
