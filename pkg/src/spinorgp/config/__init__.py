"""Settings and experiment configuration."""

from spinorgp.config.loader import (
    ConfigLoader,
    get_config,
    load_experiment,
    save_experiment,
    default_experiment,
)
from spinorgp.config.schema import (
    LabSettings,
    ExperimentConfig,
    PotentialSpec,
    RadialSpec,
    GridSpec,
    DriveSpec,
    CURRENT_SCHEMA_VERSION,
)

__all__ = [
    "ConfigLoader",
    "get_config",
    "load_experiment",
    "save_experiment",
    "default_experiment",
    "LabSettings",
    "ExperimentConfig",
    "PotentialSpec",
    "RadialSpec",
    "GridSpec",
    "DriveSpec",
    "CURRENT_SCHEMA_VERSION",
]
