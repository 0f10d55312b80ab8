"""
Audit trail for experiment runs.

Entries go to the audit directory as JSONL, never into an output directory,
so result files stay free of timestamps.
"""

import hashlib
import json
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

from loguru import logger

from spinorgp.config import get_config


def config_digest(payload: Dict[str, Any]) -> str:
    """sha256 of the canonical JSON form of a config payload."""
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class AuditLogger:
    """Log scenario and suite runs for reproducibility."""

    def __init__(self, log_dir: Optional[Path] = None):
        """
        Initialize audit logger.

        Args:
            log_dir: Directory for audit logs (default from settings)
        """
        settings = get_config()
        self.log_dir = Path(log_dir) if log_dir else settings.audit.log_dir
        self.enabled = settings.audit.enabled
        if self.enabled:
            self.log_dir.mkdir(parents=True, exist_ok=True)

        self.session_id = datetime.now().strftime("%Y%m%d_%H%M%S")
        self.session_log: List[Dict[str, Any]] = []

    def log_run(
        self,
        scenario: str,
        seed: int,
        digest: str,
        artifacts: Dict[str, Path],
        status: str = "ok",
    ):
        """
        Log one scenario run.

        Args:
            scenario: Scenario name
            seed: Seed of the run
            digest: Digest of the validated config
            artifacts: Written files by kind
            status: "ok" or "failed"
        """
        if not self.enabled:
            return

        entry = {
            "operation": "run",
            "timestamp": datetime.now().isoformat(),
            "scenario": scenario,
            "seed": seed,
            "config_digest": digest,
            "artifacts": {kind: str(path) for kind, path in artifacts.items()},
            "status": status,
        }
        self.session_log.append(entry)
        self._write_entry(entry)

    def log_suite(self, suite: str, seed: int, passed: bool, breaches: List[str]):
        if not self.enabled:
            return

        entry = {
            "operation": "suite",
            "timestamp": datetime.now().isoformat(),
            "suite": suite,
            "seed": seed,
            "passed": passed,
            "breaches": breaches,
        }
        self.session_log.append(entry)
        self._write_entry(entry)

    def _write_entry(self, entry: Dict[str, Any]):
        log_file = self.log_dir / f"audit_{self.session_id}.jsonl"
        with open(log_file, "a") as f:
            f.write(json.dumps(entry) + "\n")

    def save_session_log(self, filename: Optional[str] = None) -> Optional[Path]:
        """
        Save the complete session log to one JSON file.

        Args:
            filename: Optional custom filename
        """
        if not self.session_log:
            logger.warning("No audit entries to save")
            return None

        output_path = self.log_dir / (filename or f"audit_session_{self.session_id}.json")
        with open(output_path, "w") as f:
            json.dump({"session_id": self.session_id, "entries": self.session_log}, f, indent=2)

        logger.info(f"Audit log saved to: {output_path}")
        return output_path
