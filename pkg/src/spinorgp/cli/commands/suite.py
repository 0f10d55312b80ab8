"""Property suite command."""

import sys
from pathlib import Path

from rich.console import Console
from rich.table import Table

from spinorgp.config import get_config
from spinorgp.counting.suites import run_suite as execute_suite
from spinorgp.counting.weights import DEFAULT_XI
from spinorgp.data.audit import AuditLogger
from spinorgp.utils.errors import SpinorGPError

console = Console()


def run_suite(name, seed=0, out_dir=None, threads=1, xi=None):
    """Run one suite, print its checks and write the JSON report."""
    xi = DEFAULT_XI if xi is None else xi
    console.print(f"\n[bold blue]Suite {name} (seed {seed}, xi {xi:g})[/bold blue]\n")
    try:
        report = execute_suite(name, seed=seed, threads=threads, xi=xi)
        target = Path(out_dir) if out_dir else get_config().paths.output_dir / "suites"
        path = report.to_json(target / f"{name}.json")
        AuditLogger().log_suite(name, seed, report.passed, [c.name for c in report.breaches()])
    except SpinorGPError as e:
        console.print(f"[red]✗ {e}[/red]\n")
        sys.exit(1)

    table = Table(show_header=True, header_style="bold")
    table.add_column("Check", style="cyan")
    table.add_column("Residual", justify="right")
    table.add_column("Tolerance", justify="right")
    table.add_column("")
    for check in report.checks:
        mark = "[green]✓[/green]" if check.passed else "[red]✗[/red]"
        table.add_row(check.name, f"{check.residual:.3e}", f"{check.tolerance:.1e}", mark)
    console.print(table)
    console.print(f"\nReport: {path}")

    breaches = report.breaches()
    if breaches:
        console.print(f"[red]✗ {len(breaches)} of {len(report.checks)} checks breached[/red]\n")
        sys.exit(2)
    console.print(f"[green]✓ All {len(report.checks)} checks passed[/green]\n")
