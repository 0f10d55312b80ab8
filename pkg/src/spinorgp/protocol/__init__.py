"""Measurement protocol and the scenario runner."""

from spinorgp.protocol.levels import (
    ThreeLevelSpinor,
    pump,
    blow,
    probe,
    select_and_image,
    measure_up,
    measure_down,
    measure_joint,
)
from spinorgp.protocol.experiments import (
    SCENARIOS,
    BaseScenario,
    RunOutcome,
    register_scenario,
    run_experiment,
)
from spinorgp.protocol.plots import line_plot

__all__ = [
    "ThreeLevelSpinor",
    "pump",
    "blow",
    "probe",
    "select_and_image",
    "measure_up",
    "measure_down",
    "measure_joint",
    "SCENARIOS",
    "BaseScenario",
    "RunOutcome",
    "register_scenario",
    "run_experiment",
    "line_plot",
]
