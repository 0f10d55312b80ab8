"""Status check command."""

from importlib.metadata import PackageNotFoundError, version

from rich.console import Console
from rich.table import Table

from spinorgp.__version__ import __version__
from spinorgp.config import ConfigLoader

console = Console()

STACK = ("numpy", "scipy", "pandas", "pydantic", "matplotlib")


def _found(path) -> str:
    return "[green]✓ Exists[/green]" if path.exists() else "[yellow]✗ Not created[/yellow]"


def run_status():
    """Check and display lab status."""
    console.print(f"\n[bold blue]Spinor GP lab {__version__} - Status[/bold blue]\n")

    loader = ConfigLoader()
    settings = loader.load()
    source = str(loader.config_path) if loader.config_path else "built-in defaults"
    console.print(f"Settings: {source}")
    console.print(f"Output directory: {settings.paths.output_dir} {_found(settings.paths.output_dir)}")
    audit_state = "enabled" if settings.audit.enabled else "disabled"
    console.print(f"Audit directory: {settings.audit.log_dir} ({audit_state}) {_found(settings.audit.log_dir)}")
    console.print(f"Basis cap: {settings.limits.basis_cap}, threads: {settings.threads}\n")

    table = Table(title="Numeric stack")
    table.add_column("Package", style="cyan")
    table.add_column("Version")
    for name in STACK:
        try:
            installed = version(name)
        except PackageNotFoundError:
            installed = "[red]missing[/red]"
        table.add_row(name, installed)
    console.print(table)
    console.print()
