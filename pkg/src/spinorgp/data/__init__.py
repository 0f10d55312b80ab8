"""Result containers, binary snapshots and the audit trail."""

from spinorgp.data.results import ExperimentResult, build_id, write_json, SCHEMA_VERSION
from spinorgp.data.snapshots import (
    SnapshotKind,
    SnapshotFile,
    write_snapshots,
    read_snapshots,
    dump_spinor_trajectory,
    dump_manybody,
    dump_density_matrices,
)
from spinorgp.data.audit import AuditLogger, config_digest

__all__ = [
    "ExperimentResult",
    "build_id",
    "write_json",
    "SCHEMA_VERSION",
    "SnapshotKind",
    "SnapshotFile",
    "write_snapshots",
    "read_snapshots",
    "dump_spinor_trajectory",
    "dump_manybody",
    "dump_density_matrices",
    "AuditLogger",
    "config_digest",
]
