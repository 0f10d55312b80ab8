"""
Main CLI entry point using Click.

Provides the spinor-gp command-line tool.
"""

import click

from spinorgp.__version__ import __version__
from spinorgp.utils.errors import SpinorGPError
from spinorgp.utils.logging import setup_logging

SUITE_NAMES = ["lemma31", "lemma32", "lemma33", "lemma41", "lemma51", "lemma61"]
SCENARIO_NAMES = ["rabi", "gp_run", "scattering_sweep", "convergence_trend", "lemma_suite", "protocol_demo"]


def _log_level(verbose: bool) -> str:
    """--verbose, then the settings file (debug forces DEBUG), then INFO."""
    if verbose:
        return "DEBUG"
    from spinorgp.config import get_config

    try:
        settings = get_config()
    except SpinorGPError:
        # the commands that read settings report the problem themselves
        return "INFO"
    return "DEBUG" if settings.debug else settings.log_level


@click.group()
@click.version_option(version=__version__, prog_name="spinor-gp")
@click.option("--verbose", "-v", is_flag=True, help="Log at DEBUG level")
def cli(verbose):
    """Spinor GP lab - pseudo-spinor condensate dynamics and convergence checks."""
    setup_logging(_log_level(verbose))


@cli.command()
@click.argument("config", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_dir", type=click.Path(file_okay=False), help="Output directory")
@click.option("--seed", type=int, help="Override the config seed")
@click.option("--threads", type=click.IntRange(min=1), help="Worker threads for N sweeps")
def run(config, out_dir, seed, threads):
    """Run the experiment described by a JSON config."""
    from spinorgp.cli.commands.run import run_run
    run_run(config, out_dir=out_dir, seed=seed, threads=threads)


@cli.command()
@click.argument("name", type=click.Choice(SUITE_NAMES))
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for random states")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), help="Directory for the JSON report")
@click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True)
@click.option(
    "--xi",
    type=click.FloatRange(min=0.0, max=0.5, min_open=True, max_open=True),
    help="Exponent of the m weight [default: 0.1]",
)
def suite(name, seed, out_dir, threads, xi):
    """Run a property suite; exits with status 2 on any breach."""
    from spinorgp.cli.commands.suite import run_suite
    run_suite(name, seed=seed, out_dir=out_dir, threads=threads, xi=xi)


@cli.command()
@click.argument("config", type=click.Path(exists=True, dir_okay=False))
def validate(config):
    """Parse and check an experiment config."""
    from spinorgp.cli.commands.validate import run_validate
    run_validate(config)


@cli.command("init-config")
@click.argument("scenario", type=click.Choice(SCENARIO_NAMES))
@click.option("--out", "out_path", type=click.Path(dir_okay=False), help="Where to write the config")
def init_config(scenario, out_path):
    """Write a default config for a scenario."""
    from spinorgp.cli.commands.init_config import run_init_config
    run_init_config(scenario, out_path)


@cli.command()
def status():
    """Show settings, directories and the numeric stack."""
    from spinorgp.cli.commands.status import run_status
    run_status()


if __name__ == "__main__":
    cli()
