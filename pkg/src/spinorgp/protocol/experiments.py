"""
Scenario runner.

Each scenario is a :class:`BaseScenario` subclass registered under its
config name. ``run_experiment`` validates overrides, dispatches, writes the
CSV/JSON/SVG artifacts and records the run in the audit trail.
"""

import json
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Type, Union

import numpy as np
import pandas as pd
from loguru import logger

from spinorgp.config.loader import get_config
from spinorgp.config.schema import ExperimentConfig, GaussianSpec
from spinorgp.core.grid import Grid
from spinorgp.core.potentials import MatrixPotential, RabiParams
from spinorgp.core.spinor import LatticeOrbital, SpinorField, inner_product
from spinorgp.counting.indicators import alpha_less, alpha_tilde
from spinorgp.counting.suites import run_suite
from spinorgp.data.audit import AuditLogger, config_digest
from spinorgp.data.results import FLOAT_FORMAT, ExperimentResult
from spinorgp.data.snapshots import dump_density_matrices
from spinorgp.dynamics.gp import GPParams, evolve, l2_distance, richardson_ratio
from spinorgp.dynamics.lattice import LatticeEffectiveEquation
from spinorgp.dynamics.rabi import population_law, rabi_reference
from spinorgp.manybody.basis import build_basis
from spinorgp.manybody.density import partial_trace, trace_distance
from spinorgp.manybody.hamiltonian import HamiltonianAssembler, energy_per_particle
from spinorgp.manybody.model import LatticeModel
from spinorgp.manybody.propagate import propagate
from spinorgp.manybody.states import product_state
from spinorgp.protocol.levels import (
    ThreeLevelSpinor,
    blow,
    integrated,
    measure_down,
    measure_joint,
    measure_up,
    probe,
    pump,
)
from spinorgp.protocol.plots import line_plot
from spinorgp.scattering.radial import (
    RadialPotential,
    rescale_potential,
    scattering_length,
    square_well_length,
)
from spinorgp.scattering.shell import sweep_shell
from spinorgp.utils.errors import ConfigurationError, ScenarioError
from spinorgp.utils.logging import scenario_context, timed

TREND_SLOPE_LIMIT = -0.7

SCENARIOS: Dict[str, Type["BaseScenario"]] = {}


def register_scenario(name: str):
    """Class decorator adding a scenario to the registry."""

    def decorator(cls: Type["BaseScenario"]) -> Type["BaseScenario"]:
        cls.name = name
        SCENARIOS[name] = cls
        return cls

    return decorator


class BaseScenario(ABC):
    """Abstract base class for scenarios."""

    name: str = ""

    def __init__(self, config: ExperimentConfig, out_dir: Path):
        """
        Initialize scenario.

        Args:
            config: Validated experiment config
            out_dir: Directory receiving the artifacts
        """
        self.config = config
        self.section = config.section()
        self.out_dir = out_dir
        self.threads = config.threads
        self.rows: List[Dict[str, Any]] = []

    @abstractmethod
    def run(self) -> ExperimentResult:
        """
        Execute the scenario.

        Returns:
            ExperimentResult with summary and table
        """
        pass

    def plot(self, result: ExperimentResult) -> Dict[str, Path]:
        """Write SVG plots for a finished result; none by default."""
        return {}

    def partial_table(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows)

    def result(self, summary: Dict[str, Any], data: pd.DataFrame, **metadata) -> ExperimentResult:
        metadata.setdefault("seed", self.config.seed)
        return ExperimentResult(name=self.name, summary=summary, data=data, metadata=metadata)

    def _svg(self, stem: str) -> Path:
        return self.out_dir / f"{self.name}_{stem}.svg"


@register_scenario("rabi")
class RabiScenario(BaseScenario):
    """Uniform all-up seed under a resonant drive against the closed-form rotation."""

    def run(self) -> ExperimentResult:
        s = self.section
        rabi = s.drive.build()
        if not rabi.is_resonant:
            raise ConfigurationError("the rabi scenario compares against the resonant closed form")

        grid = Grid.cube(1, s.points_per_axis, s.length)
        u0 = np.full(grid.shape, 1.0 / np.sqrt(grid.volume), dtype=complex)
        seed = SpinorField(grid, u0, np.zeros_like(u0))
        params = GPParams(0.0, MatrixPotential.rabi(rabi), s.dt, s.t_end)

        trajectory = evolve(seed, params, record_every=s.record_every)
        law = population_law(rabi, trajectory.times)
        pops = np.asarray(trajectory.populations)
        field_error = [
            l2_distance(f, rabi_reference(seed, rabi, t))
            for t, f in zip(trajectory.times, trajectory.snapshots)
        ]

        table = trajectory.to_frame()
        table["law_up"] = law[:, 0]
        table["law_down"] = law[:, 1]
        table["deviation"] = np.max(np.abs(pops - law), axis=1)
        table["field_error"] = field_error

        summary = {
            "max_population_deviation": float(table["deviation"].max()),
            "max_field_error": float(np.max(field_error)),
            "steps": params.n_steps,
            "dt": s.dt,
        }
        logger.info(f"Rabi deviation {summary['max_population_deviation']:.3e} over {params.n_steps} steps")
        return self.result(summary, table, omega_rabi=rabi.omega_rabi, omega_drive=rabi.omega_drive)

    def plot(self, result: ExperimentResult) -> Dict[str, Path]:
        t = result.data["t"]
        return {
            "populations": line_plot(
                self._svg("populations"),
                t,
                {
                    "up": result.data["pop_up"],
                    "down": result.data["pop_down"],
                    "cos^2": result.data["law_up"],
                },
                "t",
                "population",
            )
        }


@register_scenario("gp_run")
class GPRunScenario(BaseScenario):
    """Trapped interacting run with drift diagnostics and the step-halving ratio."""

    def run(self) -> ExperimentResult:
        s = self.section
        grid = s.grid.build()
        f0 = s.initial.build(grid)
        potential = s.potential.build()
        params = GPParams(s.scattering_length, potential, s.dt, s.t_end)

        trajectory = evolve(f0, params, record_every=s.record_every, workers=self.threads)
        table = trajectory.to_frame()
        table["norm"] = table["pop_up"] + table["pop_down"]

        artifacts = {}
        if s.snapshots:
            artifacts["snapshots"] = trajectory.to_snapshots(self.out_dir / f"{self.name}.spgp")

        summary: Dict[str, Any] = {
            "steps": params.n_steps,
            "norm_drift": float(np.max(np.abs(table["norm"] - 1.0))),
            "energy_drift": float(np.max(np.abs(table["E"] - table["E"].iloc[0]))),
            "static_potential": not potential.time_dependent,
            "final_populations": list(trajectory.populations[-1]),
        }
        if s.richardson:
            summary["richardson_ratio"] = richardson_ratio(f0, params)

        return self.result(
            summary,
            table,
            coupling=params.coupling,
            grid={"dim": grid.dim, "points_per_axis": grid.shape[0], "length": list(grid.box_length)},
            snapshot_files={k: p.name for k, p in artifacts.items()},
        )

    def plot(self, result: ExperimentResult) -> Dict[str, Path]:
        t = result.data["t"]
        return {
            "populations": line_plot(
                self._svg("populations"),
                t,
                {"up": result.data["pop_up"], "down": result.data["pop_down"]},
                "t",
                "population",
            ),
            "energy": line_plot(self._svg("energy"), t, {"E": result.data["E"]}, "t", "energy"),
        }


@register_scenario("scattering_sweep")
class ScatteringSweepScenario(BaseScenario):
    """Scattering-length checks, the rescaling law and the shell norm sweep."""

    def run(self) -> ExperimentResult:
        s = self.section
        V = s.potential.build()

        analytic = []
        for height, radius in s.analytic_checks:
            numeric = scattering_length(RadialPotential.square_well(height, radius)).scattering_length
            exact = square_well_length(height, radius)
            analytic.append({
                "height": height,
                "radius": radius,
                "a_numeric": numeric,
                "a_exact": exact,
                "relative_error": abs(numeric - exact) / abs(exact) if exact else abs(numeric),
            })

        a = scattering_length(V).scattering_length
        scaling = []
        for n in s.scaling_n:
            a_n = scattering_length(rescale_potential(V, n)).scattering_length
            scaling.append({"N": n, "a_N": a_n, "ratio": a_n * n / a if a else float("nan")})

        table, slopes = sweep_shell(V, s.beta, s.n_list, threads=self.threads)
        self.rows = table.to_dict(orient="records")

        summary = {
            "scattering_length": a,
            "analytic_checks": analytic,
            "scaling_law": scaling,
            "max_scaling_deviation": max(abs(row["ratio"] - 1.0) for row in scaling),
            "slopes": slopes,
            "max_residual_a": float(table["residual_a"].abs().max()),
            "R_beta_scaled_band": float(table["R_beta_scaled"].max() / table["R_beta_scaled"].min()),
        }
        return self.result(summary, table, potential=s.potential.model_dump(), beta=s.beta)

    def plot(self, result: ExperimentResult) -> Dict[str, Path]:
        d = result.data
        return {
            "norms": line_plot(
                self._svg("norms"),
                d["N"],
                {"L1": d["g_L1"], "L3/2": d["g_L32"], "L2": d["g_L2"]},
                "N",
                "norm of g_beta",
                logx=True,
                logy=True,
                markers=True,
            )
        }


def _initial_orbital(sites: int, kind: str, modulation: float) -> LatticeOrbital:
    """All-up orbital, flat or with a cosine modulation over the ring."""
    amplitudes = np.zeros((sites, 2), dtype=complex)
    if kind == "uniform":
        amplitudes[:, 0] = 1.0
    else:
        amplitudes[:, 0] = 1.0 + modulation * np.cos(2.0 * np.pi * np.arange(sites) / sites)
    return LatticeOrbital(amplitudes).normalized()


@register_scenario("convergence_trend")
class ConvergenceTrendScenario(BaseScenario):
    """
    Mean-field ring over an N list against the lattice effective equation.

    Rows per (N, t): alpha_tilde, alpha_less (m weight exponent xi), the trace
    distance with its two bounds, condensate fraction and both energies per
    particle. The run passes when alpha_tilde at t_end falls at least as fast as
    N^TREND_SLOPE_LIMIT and the trace distance decreases with N.
    """

    def _model(self) -> LatticeModel:
        s = self.section
        potential = MatrixPotential.rabi(s.drive.build()) if s.drive is not None else MatrixPotential()
        return LatticeModel(s.sites, s.hopping, np.asarray(s.pair_profile), potential, "mean-field")

    def _sample_times(self) -> np.ndarray:
        s = self.section
        return np.linspace(s.t_end / s.samples, s.t_end, s.samples)

    def _run_one(self, n: int, equation: LatticeEffectiveEquation, cap: int) -> List[Dict[str, Any]]:
        s = self.section
        model = equation.model
        basis = build_basis(s.sites, n, cap=cap)
        assembler = HamiltonianAssembler(model, basis)
        phi = _initial_orbital(s.sites, s.initial, s.modulation)
        psi = product_state(basis, phi)

        rows, gammas = [], []
        t_prev = 0.0
        for t in self._sample_times():
            psi = propagate(psi, model, t_prev, t, s.dt, assembler=assembler)
            phi = equation.evolve(phi, t_prev, t, s.dt)
            t_prev = t

            gamma = partial_trace(psi)
            distance = trace_distance(gamma, phi)
            e_eff = equation.energy(phi, t)
            gammas.append(gamma)
            rows.append({
                "N": n,
                "t": float(t),
                "alpha_tilde": alpha_tilde(psi, phi),
                "alpha_less": alpha_less(psi, phi, model, e_eff, self.config.xi, t, assembler),
                "trace_distance": distance.distance,
                "td_lower": distance.lower,
                "td_upper": distance.upper,
                "condensate_fraction": gamma.condensate_fraction(),
                "E_N": energy_per_particle(psi, model, t, assembler),
                "E_eff": e_eff,
            })
        logger.debug(f"N = {n}: alpha_tilde(t_end) = {rows[-1]['alpha_tilde']:.3e}")

        if s.snapshots:
            dump_density_matrices(self.out_dir / f"{self.name}_gamma_N{n}.spgp", self._sample_times(), gammas)
        return rows

    def run(self) -> ExperimentResult:
        s = self.section
        cap = get_config().limits.basis_cap
        equation = LatticeEffectiveEquation(self._model(), s.coupling)

        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            futures = {pool.submit(self._run_one, n, equation, cap): n for n in s.n_list}
            for future in as_completed(futures):
                self.rows.extend(future.result())

        table = pd.DataFrame(self.rows).sort_values(["N", "t"]).reset_index(drop=True)
        final = table[np.isclose(table["t"], s.t_end)].sort_values("N")
        distances = final["trace_distance"].to_numpy()

        summary: Dict[str, Any] = {
            "n_list": list(s.n_list),
            "trace_distance_monotone": bool(np.all(np.diff(distances) < 0)),
            "all_sandwiched": bool(
                np.all(table["td_lower"] - 1e-12 <= table["trace_distance"])
                and np.all(table["trace_distance"] <= table["td_upper"] + 1e-12)
            ),
        }
        positive = final[final["alpha_tilde"] > 0]
        if len(positive) >= 2:
            slope, _ = np.polyfit(np.log(positive["N"]), np.log(positive["alpha_tilde"]), 1)
            summary["alpha_tilde_slope"] = float(slope)
        slope = summary.get("alpha_tilde_slope")
        summary["passed"] = bool(
            slope is not None and slope <= TREND_SLOPE_LIMIT and summary["trace_distance_monotone"]
        )
        if not summary["passed"]:
            logger.warning(f"convergence trend not met: slope {slope}, monotone {summary['trace_distance_monotone']}")

        return self.result(
            summary,
            table,
            effective_coupling=equation.label,
            scaling_mode="mean-field",
            sample_times=self._sample_times(),
        )

    def plot(self, result: ExperimentResult) -> Dict[str, Path]:
        d = result.data
        final = d[np.isclose(d["t"], self.section.t_end)]
        return {
            "trend": line_plot(
                self._svg("trend"),
                final["N"],
                {"alpha_tilde": final["alpha_tilde"], "trace distance": final["trace_distance"]},
                "N",
                f"value at t = {self.section.t_end:g}",
                logx=True,
                logy=True,
                markers=True,
            )
        }


@register_scenario("lemma_suite")
class LemmaSuiteScenario(BaseScenario):
    """Run property suites and write one JSON report each."""

    def run(self) -> ExperimentResult:
        audit = AuditLogger()
        outcome = {}
        for name in self.section.suites:
            report = run_suite(name, seed=self.config.seed, threads=self.threads, xi=self.config.xi)
            report.to_json(self.out_dir / f"{name}.json")
            audit.log_suite(name, self.config.seed, report.passed, [c.name for c in report.breaches()])
            outcome[name] = report.passed
            self.rows.extend(
                {
                    "suite": name,
                    "check": c.name,
                    "passed": c.passed,
                    "residual": c.residual,
                    "tolerance": c.tolerance,
                }
                for c in report.checks
            )
        summary = {"suites": outcome, "passed": all(outcome.values())}
        return self.result(summary, self.partial_table())


@register_scenario("protocol_demo")
class ProtocolDemoScenario(BaseScenario):
    """
    Gaussian seed after a Rabi pulse, and a displaced up/down pair, each
    imaged by the up, down and joint measurement chains.
    """

    def _gaussian(self, grid: Grid, center: float) -> np.ndarray:
        return GaussianSpec(width=self.section.width, center=[center]).build(grid).u

    def run(self) -> ExperimentResult:
        s = self.section
        grid = s.grid.build()
        units = RabiParams.solver_units(s.omega_rabi_hz, s.omega_drive_hz)
        rabi = RabiParams.resonant(units["omega_rabi"], units["omega_drive"])
        t_pulse = s.pulse_seconds / units["time_unit_seconds"]

        profile = self._gaussian(grid, 0.0)
        seed = SpinorField(grid, profile, np.zeros_like(profile))
        pulsed = ThreeLevelSpinor.from_field(rabi_reference(seed, rabi, t_pulse))

        half = np.sqrt(0.5)
        left = self._gaussian(grid, -0.5 * s.separation)
        right = self._gaussian(grid, 0.5 * s.separation)
        pair_field = SpinorField(grid, half * left, half * right)
        pair = ThreeLevelSpinor.from_field(pair_field)

        w = grid.cell_volume
        table = pd.DataFrame({"x": grid.axes()[0]})
        masses = {}
        for label, state in (("pulse", pulsed), ("pair", pair)):
            for chain, fn in (("up", measure_up), ("down", measure_down), ("joint", measure_joint)):
                image = fn(state)
                table[f"{label}_{chain}"] = image.reshape(-1)
                masses[f"{label}_{chain}"] = integrated(image, w)

        direct = probe(pump(blow(pair)))
        chain_residual = float(max(
            np.max(np.abs(direct.u)),
            np.max(np.abs(direct.v)),
            np.max(np.abs(direct.w - pair.u)),
        ))
        overlap = inner_product(
            SpinorField(grid, pair_field.u, np.zeros_like(pair_field.u)),
            SpinorField(grid, pair_field.v, np.zeros_like(pair_field.v)),
        )

        summary = {
            "masses": masses,
            "up_chain_residual": chain_residual,
            "pair_overlap": abs(overlap),
            "pulse_population_down": float(np.sin(rabi.omega_rabi * t_pulse) ** 2),
        }
        metadata = {
            "unit_conversion": {
                "time_unit_seconds": units["time_unit_seconds"],
                "omega_rabi_hz": s.omega_rabi_hz,
                "omega_drive_hz": s.omega_drive_hz,
                "omega_rabi_solver": units["omega_rabi"],
                "omega_drive_solver": units["omega_drive"],
                "pulse_solver": t_pulse,
            },
        }
        return self.result(summary, table, **metadata)

    def plot(self, result: ExperimentResult) -> Dict[str, Path]:
        d = result.data
        paths = {}
        for label in ("pulse", "pair"):
            paths[label] = line_plot(
                self._svg(label),
                d["x"],
                {chain: d[f"{label}_{chain}"] for chain in ("up", "down", "joint")},
                "x",
                "image",
            )
        return paths


@dataclass
class RunOutcome:
    """Result of one run and the files it produced."""

    result: ExperimentResult
    artifacts: Dict[str, Path] = field(default_factory=dict)


def _embedded_config(config: ExperimentConfig) -> Dict[str, Any]:
    """Config as stored in the result metadata; output location and threads do not affect results."""
    payload = json.loads(config.model_dump_json(exclude={"output_dir", "threads"}))
    return {
        "scenario": config.scenario,
        "seed": config.seed,
        "xi": config.xi,
        config.scenario: payload[config.scenario],
    }


def run_experiment(
    config: ExperimentConfig,
    out_dir: Optional[Union[str, Path]] = None,
    seed: Optional[int] = None,
    threads: Optional[int] = None,
) -> RunOutcome:
    """
    Run one scenario and write its artifacts.

    Overrides replace the matching config fields before dispatch. On failure the
    rows gathered so far go to ``<scenario>_partial.csv`` and the error is
    re-raised as ScenarioError.
    """
    updates: Dict[str, Any] = {}
    if out_dir is not None:
        updates["output_dir"] = Path(out_dir)
    if seed is not None:
        updates["seed"] = seed
    if threads is not None:
        updates["threads"] = threads
    if updates:
        try:
            config = ExperimentConfig.model_validate({**config.model_dump(), **updates})
        except ValueError as exc:
            raise ConfigurationError(f"invalid override: {exc}") from exc

    if config.scenario not in SCENARIOS:
        raise ConfigurationError(f"unknown scenario {config.scenario!r}")

    target = Path(config.output_dir)
    target.mkdir(parents=True, exist_ok=True)
    digest = config_digest(_embedded_config(config))
    audit = AuditLogger()
    scenario = SCENARIOS[config.scenario](config, target)

    with scenario_context(config.scenario):
        logger.info(f"Running scenario {config.scenario} (seed {config.seed}) into {target}")
        try:
            with timed(f"scenario {config.scenario}"):
                result = scenario.run()
        except Exception as exc:
            artifacts = {}
            partial = scenario.partial_table()
            if not partial.empty:
                artifacts["partial"] = target / f"{config.scenario}_partial.csv"
                partial.to_csv(artifacts["partial"], index=False, float_format=FLOAT_FORMAT)
                logger.warning(f"Partial results flushed to: {artifacts['partial']}")
            audit.log_run(config.scenario, config.seed, digest, artifacts, status="failed")
            if isinstance(exc, ScenarioError):
                raise
            raise ScenarioError(config.scenario, exc) from exc

        result.metadata["config"] = _embedded_config(config)
        result.metadata["config_digest"] = digest
        artifacts = result.write(target)
        artifacts.update(scenario.plot(result))
        for path in sorted(target.glob(f"{config.scenario}*.spgp")):
            artifacts[path.stem] = path

        audit.log_run(config.scenario, config.seed, digest, artifacts)
        logger.success(f"Scenario {config.scenario} finished: {len(artifacts)} artifacts")
    return RunOutcome(result, artifacts)


__all__ = [
    "SCENARIOS",
    "BaseScenario",
    "RunOutcome",
    "register_scenario",
    "run_experiment",
]
