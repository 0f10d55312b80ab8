"""Shared fixtures."""

import pytest

from spinorgp.config import loader
from spinorgp.config.schema import AuditConfig, LabSettings, PathConfig


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    """Point the cached lab settings at a temporary directory."""
    settings = LabSettings(
        paths=PathConfig(output_dir=tmp_path / "output", audit_dir=tmp_path / "audit"),
        audit=AuditConfig(enabled=True, log_dir=tmp_path / "audit"),
    )
    monkeypatch.setattr(loader, "_global_config", settings)
    return settings
