"""Config validation command."""

import sys

from rich.console import Console
from rich.table import Table

from spinorgp.config import load_experiment
from spinorgp.utils.errors import SpinorGPError

console = Console()


def _flatten(prefix: str, value, rows: list) -> None:
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten(f"{prefix}.{key}" if prefix else key, value[key], rows)
    else:
        rows.append((prefix, value))


def run_validate(config_path):
    """Parse an experiment config and print the section its scenario uses."""
    console.print(f"\n[bold blue]Validating {config_path}[/bold blue]\n")
    try:
        config = load_experiment(config_path)
    except SpinorGPError as e:
        console.print(f"[red]✗ {e}[/red]\n")
        sys.exit(1)

    rows = []
    _flatten("", config.section().model_dump(mode="json"), rows)
    table = Table(title=f"{config.scenario} (schema v{config.schema_version}, seed {config.seed})")
    table.add_column("Field", style="cyan")
    table.add_column("Value")
    for key, value in rows:
        table.add_row(key, str(value))
    console.print(table)
    console.print("\n[green]✓ Config is valid[/green]\n")
