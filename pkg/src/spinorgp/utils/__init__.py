"""Utility functions and helpers."""

from spinorgp.utils.logging import setup_logging
from spinorgp.utils.errors import (
    SpinorGPError,
    ConfigurationError,
    ContractError,
    StructuralError,
)

__all__ = [
    "setup_logging",
    "SpinorGPError",
    "ConfigurationError",
    "ContractError",
    "StructuralError",
]
