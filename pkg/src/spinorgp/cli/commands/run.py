"""Experiment run command."""

import sys

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from spinorgp.config import load_experiment
from spinorgp.protocol import run_experiment
from spinorgp.utils.errors import SpinorGPError

console = Console()


def _summary_table(summary: dict) -> Table:
    table = Table(title="Summary", show_header=True, header_style="bold")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value")
    for key in sorted(summary):
        value = summary[key]
        if isinstance(value, float):
            text = f"{value:.6g}"
        elif isinstance(value, (dict, list)):
            text = f"{len(value)} entries"
        else:
            text = str(value)
        table.add_row(key, text)
    return table


def run_run(config_path, out_dir=None, seed=None, threads=None):
    """Load a config, run its scenario and list the artifacts."""
    try:
        config = load_experiment(config_path)
        console.print(f"\n[bold blue]Running {config.scenario}[/bold blue]\n")
        outcome = run_experiment(config, out_dir=out_dir, seed=seed, threads=threads)
    except SpinorGPError as e:
        console.print(f"\n[red]✗ {e}[/red]\n")
        sys.exit(1)

    console.print(_summary_table(outcome.result.summary))
    files = "\n".join(f"{kind}: {path}" for kind, path in sorted(outcome.artifacts.items()))
    console.print(Panel(files, title="Artifacts", expand=False))

    if outcome.result.summary.get("passed") is False:
        console.print("[yellow]Property breaches found[/yellow]\n")
        sys.exit(2)
    console.print("[green]✓ Done[/green]\n")
