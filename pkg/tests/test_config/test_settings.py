"""Lab settings: layered loading and environment overrides."""

from pathlib import Path

import pytest

from spinorgp.config import loader
from spinorgp.config.loader import ConfigLoader, get_config
from spinorgp.config.schema import LabSettings
from spinorgp.utils.errors import ConfigurationError


def write_settings(root: Path, text: str) -> Path:
    path = root / "config" / "config.yaml"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def test_defaults():
    settings = LabSettings()
    assert settings.threads == 1
    assert settings.limits.basis_cap == 200_000
    assert settings.limits.expansion_cap == 2_000_000
    assert settings.audit.enabled


def test_file_paths_resolve_against_project_root(tmp_path):
    path = write_settings(tmp_path, "paths:\n  output_dir: results\nthreads: 2\n")
    settings = ConfigLoader(path).load()
    assert settings.threads == 2
    assert settings.paths.output_dir == (tmp_path / "results").resolve()
    assert settings.audit.log_dir.is_absolute()


def test_environment_overrides_file(tmp_path, monkeypatch):
    path = write_settings(tmp_path, "threads: 2\nlimits:\n  basis_cap: 1000\n")
    monkeypatch.setenv("SPINORGP_THREADS", "6")
    monkeypatch.setenv("SPINORGP_BASIS_CAP", "5000")
    monkeypatch.setenv("SPINORGP_DEBUG", "yes")
    settings = ConfigLoader(path).load()
    assert settings.threads == 6
    assert settings.limits.basis_cap == 5000
    assert settings.debug


def test_invalid_settings_raise(tmp_path):
    path = write_settings(tmp_path, "threads: 0\n")
    with pytest.raises(ConfigurationError):
        ConfigLoader(path).load()


def test_loader_caches_until_reload(tmp_path):
    path = write_settings(tmp_path, "threads: 2\n")
    config_loader = ConfigLoader(path)
    first = config_loader.load()
    assert config_loader.load() is first
    path.write_text("threads: 3\n")
    assert config_loader.reload().threads == 3


def test_global_settings_come_from_fixture(isolated_settings):
    assert get_config() is isolated_settings
    assert loader._global_config is isolated_settings
