"""Default config generator."""

import sys
from pathlib import Path

from rich.console import Console

from spinorgp.config import default_experiment, save_experiment
from spinorgp.utils.errors import SpinorGPError

console = Console()


def run_init_config(scenario, out_path=None):
    """Write the default config of a scenario as JSON."""
    path = Path(out_path) if out_path else Path(f"{scenario}.json")
    if path.exists():
        console.print(f"[red]✗ {path} already exists[/red]")
        sys.exit(1)
    try:
        save_experiment(default_experiment(scenario), path)
    except SpinorGPError as e:
        console.print(f"[red]✗ {e}[/red]")
        sys.exit(1)
    console.print(f"[green]✓ Wrote {scenario} config to {path}[/green]")
