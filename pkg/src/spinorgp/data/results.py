"""
Result containers and deterministic exports.

JSON payloads carry the schema version and a build id but never wall-clock
times, so reruns with the same seed produce identical files.
"""

import json
import subprocess
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
import pandas as pd
from loguru import logger

from spinorgp.__version__ import __version__

SCHEMA_VERSION = 1
FLOAT_FORMAT = "%.12e"


@lru_cache(maxsize=1)
def build_id() -> str:
    """``git describe --always --dirty`` of the source tree, else the package version."""
    try:
        described = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=5,
            check=True,
        ).stdout.strip()
    except (OSError, subprocess.SubprocessError):
        described = ""
    return described or f"v{__version__}"


def to_plain(value: Any) -> Any:
    """numpy scalars and arrays to JSON-native values, recursively."""
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_plain(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    return value


def write_json(payload: Dict[str, Any], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(to_plain(payload), f, indent=2, sort_keys=True)
        f.write("\n")
    return path


@dataclass
class ExperimentResult:
    """Container for one scenario's outputs."""

    name: str
    summary: Dict[str, Any]
    data: pd.DataFrame
    metadata: Dict[str, Any] = field(default_factory=dict)

    def to_csv(self, path: Union[str, Path]) -> Path:
        """Export the table with a fixed float format."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.data.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        logger.info(f"Data exported to: {path}")
        return path

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "build_id": build_id(),
            "name": self.name,
            "summary": self.summary,
            "metadata": self.metadata,
        }

    def to_json(self, path: Union[str, Path]) -> Path:
        """Export summary and metadata; the table goes to CSV."""
        path = write_json(self.to_dict(), path)
        logger.info(f"Results exported to: {path}")
        return path

    def write(self, out_dir: Union[str, Path], stem: Optional[str] = None) -> Dict[str, Path]:
        out_dir = Path(out_dir)
        stem = stem or self.name
        paths = {"json": self.to_json(out_dir / f"{stem}.json")}
        if not self.data.empty:
            paths["csv"] = self.to_csv(out_dir / f"{stem}.csv")
        return paths
