"""
Settings loader with a layered priority system, plus experiment-file loading.

Priority order for lab settings:
1. Environment variables
2. Local settings file (config/local.yaml)
3. Default settings file (config/config.yaml)
4. Built-in defaults
"""

import json
import os
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from loguru import logger
from pydantic import ValidationError

from spinorgp.config.schema import ExperimentConfig, LabSettings, ScenarioName
from spinorgp.utils.errors import ConfigurationError


class ConfigLoader:
    """Load and manage lab settings."""

    def __init__(self, config_path: Optional[Path] = None):
        """
        Initialize config loader.

        Args:
            config_path: Optional path to a settings file. If not provided,
                        config/local.yaml or config/config.yaml is searched for
        """
        self.config_path = Path(config_path) if config_path else self._find_config_file()
        self._config: Optional[LabSettings] = None

    def _find_config_file(self) -> Optional[Path]:
        """Find the settings file in the working directory or its parents."""
        current = Path.cwd().resolve()
        for _ in range(5):
            for name in ("config/local.yaml", "config/config.yaml"):
                candidate = current / name
                if candidate.exists():
                    logger.debug(f"Found settings file: {candidate}")
                    return candidate
            if current.parent == current:
                break
            current = current.parent

        logger.debug("No settings file found, using defaults")
        return None

    def load(self) -> LabSettings:
        """
        Load settings from file and environment.

        Returns:
            LabSettings instance
        """
        if self._config is not None:
            return self._config

        config_dict: Dict[str, Any] = {}
        if self.config_path and self.config_path.exists():
            with open(self.config_path, "r") as f:
                file_config = yaml.safe_load(f)
                if file_config:
                    config_dict.update(file_config)

        for key, value in self._load_env_vars().items():
            if isinstance(value, dict):
                config_dict.setdefault(key, {}).update(value)
            else:
                config_dict[key] = value

        try:
            self._config = LabSettings(**config_dict)
        except ValidationError as exc:
            raise ConfigurationError(f"invalid lab settings: {exc}") from exc

        # relative paths are taken against the project root, the parent of config/
        if self.config_path:
            project_root = self.config_path.resolve().parent.parent
        else:
            project_root = Path.cwd()
        self._config.paths = self._config.paths.resolve_paths(project_root)
        if not self._config.audit.log_dir.is_absolute():
            self._config.audit.log_dir = (project_root / self._config.audit.log_dir).resolve()
        return self._config

    def _load_env_vars(self) -> Dict[str, Any]:
        """Load settings from environment variables."""
        env_config: Dict[str, Any] = {}

        if output_dir := os.getenv("SPINORGP_OUTPUT_DIR"):
            env_config.setdefault("paths", {})["output_dir"] = output_dir

        if threads := os.getenv("SPINORGP_THREADS"):
            env_config["threads"] = threads

        if basis_cap := os.getenv("SPINORGP_BASIS_CAP"):
            env_config.setdefault("limits", {})["basis_cap"] = basis_cap

        if debug := os.getenv("SPINORGP_DEBUG"):
            env_config["debug"] = debug.lower() in ("true", "1", "yes")

        return env_config

    def reload(self) -> LabSettings:
        """Reload settings from file."""
        self._config = None
        return self.load()


_global_config: Optional[LabSettings] = None


def get_config(config_path: Optional[Path] = None, reload: bool = False) -> LabSettings:
    """
    Get the global settings instance.

    Args:
        config_path: Optional path to a settings file
        reload: Force reload from file
    """
    global _global_config

    if _global_config is None or reload:
        _global_config = ConfigLoader(config_path).load()

    return _global_config


def load_experiment(path: Union[str, Path]) -> ExperimentConfig:
    """
    Parse and validate an experiment file (JSON, or YAML as a superset).

    Raises:
        ConfigurationError: unreadable file or failed validation
    """
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"experiment file not found: {path}")
    with open(path, "r") as f:
        payload = yaml.safe_load(f)
    if not isinstance(payload, dict):
        raise ConfigurationError(f"{path} does not hold a mapping")
    try:
        config = ExperimentConfig.model_validate(payload)
    except ValidationError as exc:
        raise ConfigurationError(f"invalid experiment file {path}:\n{exc}") from exc
    logger.debug(f"Loaded {config.scenario} experiment from {path}")
    return config


def default_experiment(scenario: ScenarioName) -> ExperimentConfig:
    return ExperimentConfig(scenario=scenario)


def save_experiment(config: ExperimentConfig, path: Union[str, Path]) -> Path:
    """Write the config as indented JSON."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(json.loads(config.model_dump_json()), f, indent=2)
        f.write("\n")
    return path
