"""
Configuration schema definitions using Pydantic.

Two layers: ``LabSettings`` holds machine-level settings (paths, limits,
audit), ``ExperimentConfig`` describes one run. Experiment files are JSON
with a versioned schema field; the small ``build()`` helpers turn validated
sections into domain objects.
"""

from pathlib import Path
from typing import Annotated, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import AfterValidator, BaseModel, ConfigDict, Field, field_validator, model_validator

from spinorgp.core.grid import Grid
from spinorgp.core.potentials import (
    Component,
    Constant,
    HarmonicTrap,
    MatrixPotential,
    RabiParams,
    Zero,
)
from spinorgp.core.spinor import SpinorField
from spinorgp.scattering.radial import RadialPotential

CURRENT_SCHEMA_VERSION = 1

ScenarioName = Literal[
    "rabi", "gp_run", "scattering_sweep", "convergence_trend", "lemma_suite", "protocol_demo"
]
SuiteName = Literal["lemma31", "lemma32", "lemma33", "lemma41", "lemma51", "lemma61"]


# lab settings

class PathConfig(BaseModel):
    """File path configuration."""

    output_dir: Path = Field(default=Path("output"))
    audit_dir: Path = Field(default=Path(".audit"))

    def resolve_paths(self, base_dir: Path) -> "PathConfig":
        """
        Resolve all relative paths against a base directory.

        Args:
            base_dir: The base directory (typically the project root)
        """
        resolved = {}
        for field_name in type(self).model_fields:
            path = getattr(self, field_name)
            resolved[field_name] = path if path.is_absolute() else (base_dir / path).resolve()
        return PathConfig(**resolved)


class LimitsConfig(BaseModel):
    """Size caps for the exact many-body machinery."""

    basis_cap: int = Field(default=200_000, ge=1)
    expansion_cap: int = Field(default=2_000_000, ge=1)


class AuditConfig(BaseModel):
    """Audit trail configuration."""

    enabled: bool = True
    log_dir: Path = Field(default=Path(".audit"))


class LabSettings(BaseModel):
    """Main lab settings."""

    model_config = ConfigDict(extra="allow")

    paths: PathConfig = Field(default_factory=PathConfig)
    limits: LimitsConfig = Field(default_factory=LimitsConfig)
    audit: AuditConfig = Field(default_factory=AuditConfig)
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"
    threads: int = Field(default=1, ge=1)
    debug: bool = False


# building blocks

class ZeroSpec(BaseModel):
    kind: Literal["zero"] = "zero"

    def build(self) -> Component:
        return Zero()


class ConstantSpec(BaseModel):
    kind: Literal["constant"] = "constant"
    value: float = 0.0

    def build(self) -> Component:
        return Constant(self.value)


class HarmonicSpec(BaseModel):
    """omega^2 |x - center|^2 / 4 + offset; bounded on the finite periodic box."""

    kind: Literal["harmonic"] = "harmonic"
    omega: float = Field(default=1.0, gt=0)
    center: List[float] = Field(default_factory=lambda: [0.0])
    offset: float = 0.0

    def build(self) -> Component:
        return HarmonicTrap(self.omega, tuple(self.center), self.offset)


ComponentSpec = Annotated[Union[ZeroSpec, ConstantSpec, HarmonicSpec], Field(discriminator="kind")]


class DriveSpec(BaseModel):
    """Plane-rotating two-photon drive; ``v_hf`` defaults to resonance (omega_drive / 2)."""

    omega_rabi: float = Field(default=1.0, ge=0)
    omega_drive: float = Field(default=2.0, ge=0)
    v_hf: Optional[float] = None

    def build(self) -> RabiParams:
        if self.v_hf is None:
            return RabiParams.resonant(self.omega_rabi, self.omega_drive)
        return RabiParams(self.omega_rabi, self.omega_drive, self.v_hf)


class PotentialSpec(BaseModel):
    """Traps on each level plus an optional Rabi drive."""

    trap_up: ComponentSpec = Field(default_factory=ZeroSpec)
    trap_down: ComponentSpec = Field(default_factory=ZeroSpec)
    drive: Optional[DriveSpec] = None
    horizon: Optional[float] = Field(default=None, gt=0)

    def build(self) -> MatrixPotential:
        if self.drive is not None:
            return MatrixPotential.rabi(
                self.drive.build(), self.trap_up.build(), self.trap_down.build(), self.horizon
            )
        return MatrixPotential(trap_up=self.trap_up.build(), trap_down=self.trap_down.build(), horizon=self.horizon)


class RadialSpec(BaseModel):
    """Nonnegative, compactly supported pair potential."""

    kind: Literal["square_well", "soft_cap"] = "square_well"
    height: float = Field(default=2.0, ge=0)
    radius: float = Field(default=1.0, gt=0)

    def build(self) -> RadialPotential:
        if self.kind == "soft_cap":
            return RadialPotential.soft_cap(self.height, self.radius)
        return RadialPotential.square_well(self.height, self.radius)


class GridSpec(BaseModel):
    dim: int = Field(default=1, ge=1, le=3)
    points_per_axis: int = 128
    length: float = Field(default=20.0, gt=0)

    @field_validator("points_per_axis")
    @classmethod
    def power_of_two(cls, v: int) -> int:
        if v < 2 or v & (v - 1):
            raise ValueError(f"points_per_axis must be a power of two, got {v}")
        return v

    def build(self) -> Grid:
        return Grid.cube(self.dim, self.points_per_axis, self.length)


class GaussianSpec(BaseModel):
    """Gaussian seed split over the two levels; the level weights are the squared norms."""

    width: float = Field(default=1.0, gt=0)
    center: List[float] = Field(default_factory=lambda: [0.0])
    up_weight: float = Field(default=1.0, ge=0)
    down_weight: float = Field(default=0.0, ge=0)
    relative_phase: float = 0.0

    @model_validator(mode="after")
    def weights_sum_to_one(self) -> "GaussianSpec":
        if abs(self.up_weight + self.down_weight - 1.0) > 1e-12:
            raise ValueError(
                f"level weights must sum to 1, got {self.up_weight} + {self.down_weight}"
            )
        return self

    def build(self, grid: Grid) -> SpinorField:
        x = grid.positions
        c = np.broadcast_to(np.asarray(self.center, dtype=float), (grid.dim,))
        profile = np.exp(-np.sum((x - c) ** 2, axis=-1) / (2.0 * self.width ** 2)).astype(complex)
        profile /= np.sqrt(np.sum(np.abs(profile) ** 2) * grid.cell_volume)
        u = np.sqrt(self.up_weight) * profile
        v = np.sqrt(self.down_weight) * np.exp(1j * self.relative_phase) * profile
        return SpinorField(grid, u, v)


def _check_n_list(values: List[int]) -> List[int]:
    if not values:
        raise ValueError("N list must not be empty")
    if any(n < 1 for n in values):
        raise ValueError("particle numbers must be at least 1")
    if list(values) != sorted(set(values)):
        raise ValueError("N list must be sorted and free of duplicates")
    return values


NList = Annotated[List[int], AfterValidator(_check_n_list)]


class _Stepping(BaseModel):
    dt: float = Field(gt=0)
    t_end: float = Field(gt=0)

    @model_validator(mode="after")
    def dt_within_run(self):
        if self.dt > self.t_end:
            raise ValueError(f"dt = {self.dt} exceeds t_end = {self.t_end}")
        return self


# scenario sections

class RabiSection(_Stepping):
    """Uniform seed under a resonant drive; spatial dynamics frozen."""

    drive: DriveSpec = Field(default_factory=DriveSpec)
    points_per_axis: int = 4
    length: float = Field(default=10.0, gt=0)
    dt: float = Field(default=2.0 * np.pi / 2 ** 17, gt=0)
    t_end: float = Field(default=2.0 * np.pi, gt=0)
    record_every: int = Field(default=1024, ge=1)


class GPRunSection(_Stepping):
    grid: GridSpec = Field(default_factory=GridSpec)
    scattering_length: float = Field(default=0.01, ge=0)
    potential: PotentialSpec = Field(
        default_factory=lambda: PotentialSpec(trap_up=HarmonicSpec(), trap_down=HarmonicSpec(), drive=DriveSpec())
    )
    initial: GaussianSpec = Field(default_factory=GaussianSpec)
    dt: float = Field(default=1e-3, gt=0)
    t_end: float = Field(default=1.0, gt=0)
    record_every: int = Field(default=10, ge=1)
    richardson: bool = True
    snapshots: bool = True


class ScatteringSweepSection(BaseModel):
    potential: RadialSpec = Field(default_factory=RadialSpec)
    beta: float = Field(default=0.2, gt=0, lt=1)
    n_list: NList = Field(default_factory=lambda: [100, 1000, 10000, 100000])
    analytic_checks: List[Tuple[float, float]] = Field(
        default_factory=lambda: [(2.0, 1.0), (10.0, 0.5), (0.5, 2.0)]
    )
    scaling_n: NList = Field(default_factory=lambda: [2, 10, 100])



class ConvergenceTrendSection(_Stepping):
    """Mean-field trend on a small ring against the lattice effective equation."""

    sites: int = Field(default=4, ge=2, le=8)
    hopping: float = Field(default=1.0, gt=0)
    pair_profile: List[float] = Field(default_factory=lambda: [1.0])
    coupling: Literal["contact", "hartree"] = "contact"
    drive: Optional[DriveSpec] = Field(default_factory=DriveSpec)
    initial: Literal["uniform", "modulated"] = "modulated"
    modulation: float = Field(default=0.5, ge=0, lt=1)
    n_list: NList = Field(default_factory=lambda: [2, 3, 4, 5, 6, 8])
    dt: float = Field(default=0.01, gt=0)
    t_end: float = Field(default=1.0, gt=0)
    samples: int = Field(default=5, ge=1)
    snapshots: bool = False

    @field_validator("pair_profile")
    @classmethod
    def nonnegative_pair(cls, v: List[float]) -> List[float]:
        if not v or any(x < 0 for x in v):
            raise ValueError("pair profile must be nonempty and nonnegative")
        return v


class LemmaSuiteSection(BaseModel):
    suites: List[SuiteName] = Field(
        default_factory=lambda: ["lemma31", "lemma32", "lemma33", "lemma41", "lemma51", "lemma61"]
    )


class ProtocolDemoSection(BaseModel):
    """Gaussian seed under a physical Rabi pulse, imaged by the three measurement chains."""

    grid: GridSpec = Field(default_factory=lambda: GridSpec(points_per_axis=256, length=40.0))
    width: float = Field(default=2.0, gt=0)
    separation: float = Field(default=8.0, ge=0)
    pulse_seconds: float = Field(default=400e-6, gt=0)
    omega_rabi_hz: float = Field(default=2.0 * np.pi * 625.0, gt=0)
    omega_drive_hz: float = Field(default=2.0 * np.pi * 6.8e9, gt=0)


class ExperimentConfig(BaseModel):
    """One experiment run; only the section named by ``scenario`` is used."""

    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = CURRENT_SCHEMA_VERSION
    scenario: ScenarioName
    seed: int = Field(default=0, ge=0)
    output_dir: Path = Field(default=Path("output"))
    threads: int = Field(default=1, ge=1)
    xi: float = Field(default=0.1, gt=0, lt=0.5)

    rabi: RabiSection = Field(default_factory=RabiSection)
    gp_run: GPRunSection = Field(default_factory=GPRunSection)
    scattering_sweep: ScatteringSweepSection = Field(default_factory=ScatteringSweepSection)
    convergence_trend: ConvergenceTrendSection = Field(default_factory=ConvergenceTrendSection)
    lemma_suite: LemmaSuiteSection = Field(default_factory=LemmaSuiteSection)
    protocol_demo: ProtocolDemoSection = Field(default_factory=ProtocolDemoSection)

    def section(self) -> BaseModel:
        return getattr(self, self.scenario)
